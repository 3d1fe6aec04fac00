fn main() {
    std::process::exit(haarquench_cli::main_with(std::env::args_os()));
}
