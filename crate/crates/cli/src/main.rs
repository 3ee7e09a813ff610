fn main() {
    std::process::exit(thompson_cli::app::main_with_args(std::env::args_os()));
}
