fn main() {
    std::process::exit(bbgraph::cli::run(std::env::args_os()));
}
