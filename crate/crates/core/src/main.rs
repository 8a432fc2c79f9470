fn main() {
    std::process::exit(endokalc::cli::run(std::env::args_os()));
}
