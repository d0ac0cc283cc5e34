fn main() {
    std::process::exit(pythcolor::cli::run(std::env::args_os()));
}
