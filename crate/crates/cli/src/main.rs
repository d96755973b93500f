fn main() {
    std::process::exit(corescope_cli::main_with_args(std::env::args_os()));
}
