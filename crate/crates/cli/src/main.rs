fn main() {
    std::process::exit(linefield_cli::run_from_env());
}
