fn main() {
    std::process::exit(melnikov_cli::cli::main_with(std::env::args_os()));
}
