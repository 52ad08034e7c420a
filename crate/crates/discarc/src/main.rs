fn main() {
    std::process::exit(discarc::cli::run(std::env::args_os()));
}
