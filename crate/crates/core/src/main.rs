fn main() {
    std::process::exit(blockrange::cli::run(std::env::args_os()));
}
