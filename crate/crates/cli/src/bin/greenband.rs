fn main() {
    std::process::exit(greenband_cli::run(std::env::args_os()));
}
