fn main() {
    std::process::exit(pseudometric::cli::run(std::env::args_os()));
}
