fn main() {
    std::process::exit(clambda::cli::main_with_args(std::env::args_os()));
}
