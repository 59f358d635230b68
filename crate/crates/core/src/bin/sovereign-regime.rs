fn main() {
    std::process::exit(sovereign_regime::cli::run(std::env::args_os()));
}
