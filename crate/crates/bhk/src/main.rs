fn main() {
    std::process::exit(bhk::cli::run_cli(std::env::args_os()));
}
