fn main() {
    std::process::exit(szego_cli::run_from(std::env::args_os()));
}
