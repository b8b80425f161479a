fn main() {
    std::process::exit(helixkit_cli::run(std::env::args_os()));
}
