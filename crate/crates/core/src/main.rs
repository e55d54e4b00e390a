fn main() {
    std::process::exit(girre::cli::run(std::env::args_os()));
}
