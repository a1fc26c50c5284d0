fn main() {
    std::process::exit(coshbar::cli::run(std::env::args_os()));
}
