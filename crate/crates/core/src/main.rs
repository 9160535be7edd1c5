fn main() {
    std::process::exit(alcmod::cli::run(std::env::args_os()));
}
