fn main() {
    std::process::exit(relmeasure::cli::main_with_args(std::env::args_os()));
}
