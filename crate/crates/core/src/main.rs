fn main() {
    std::process::exit(pmwct::cli::main_with_args(std::env::args_os()));
}
