fn main() {
    std::process::exit(qdist::cli::run(std::env::args_os()));
}
