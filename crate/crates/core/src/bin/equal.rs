fn main() {
    std::process::exit(equal::cli::run(std::env::args_os()));
}
