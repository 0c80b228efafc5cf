fn main() {
    std::process::exit(helfrich_cli::run(std::env::args_os()));
}
