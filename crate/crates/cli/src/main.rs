fn main() {
    std::process::exit(rotor_cli::run(std::env::args_os()));
}
