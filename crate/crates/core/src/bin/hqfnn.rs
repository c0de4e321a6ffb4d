fn main() {
    std::process::exit(hqfnn::cli::run_cli(std::env::args_os()));
}
