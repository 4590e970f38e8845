//! Interned labels.
//!
//! Strings only exist at the API boundary. Inside a graph every node and edge
//! label is a dense [`LabelId`] handed out by that graph's [`Vocabulary`].

use std::collections::HashMap;
use std::fmt;

/// Dense identifier of an interned label, local to one [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

impl LabelId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for LabelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.0)
    }
}

/// String <-> id table shared by the nodes and edges of one graph.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    names: Vec<String>,
    ids: HashMap<String, LabelId>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> LabelId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = LabelId(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<LabelId> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: LabelId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Sorted, duplicate-free set of label ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LabelSet(Box<[LabelId]>);

impl LabelSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_ids(ids: impl IntoIterator<Item = LabelId>) -> Self {
        let mut v: Vec<LabelId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        LabelSet(v.into_boxed_slice())
    }

    pub fn ids(&self) -> &[LabelId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: LabelId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    /// Exact set containment, `self ⊆ other`. Linear merge over both sorted sets.
    pub fn is_subset(&self, other: &LabelSet) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut theirs = other.0.iter();
        'outer: for a in self.0.iter() {
            for b in theirs.by_ref() {
                if b == a {
                    continue 'outer;
                }
                if b > a {
                    return false;
                }
            }
            return false;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(ids: &[u32]) -> LabelSet {
        LabelSet::from_ids(ids.iter().map(|&i| LabelId(i)))
    }

    #[test]
    fn dedups_and_sorts() {
        assert_eq!(set(&[3, 1, 3, 2]).ids(), &[LabelId(1), LabelId(2), LabelId(3)]);
    }

    #[test]
    fn subset_edge_cases() {
        assert!(set(&[]).is_subset(&set(&[])));
        assert!(set(&[]).is_subset(&set(&[4])));
        assert!(!set(&[4]).is_subset(&set(&[])));
        assert!(set(&[2, 5]).is_subset(&set(&[1, 2, 3, 5])));
        assert!(!set(&[2, 6]).is_subset(&set(&[1, 2, 3, 5])));
        assert!(!set(&[0]).is_subset(&set(&[1])));
    }

    #[test]
    fn interning_is_stable() {
        let mut v = Vocabulary::new();
        let a = v.intern("Person");
        let b = v.intern("Flat");
        assert_eq!(v.intern("Person"), a);
        assert_ne!(a, b);
        assert_eq!(v.name(b), "Flat");
        assert_eq!(v.get("Squad"), None);
    }

    proptest! {
        #[test]
        fn subset_matches_btreeset(a in proptest::collection::vec(0u32..8, 0..6),
                                   b in proptest::collection::vec(0u32..8, 0..6)) {
            let sa: std::collections::BTreeSet<_> = a.iter().copied().collect();
            let sb: std::collections::BTreeSet<_> = b.iter().copied().collect();
            prop_assert_eq!(set(&a).is_subset(&set(&b)), sa.is_subset(&sb));
        }
    }
}
