fn main() {
    std::process::exit(nanofiber::cli::run(std::env::args_os()));
}
