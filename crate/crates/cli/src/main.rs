fn main() {
    std::process::exit(robin_dce_cli::main_with_args(std::env::args_os().skip(1)));
}
