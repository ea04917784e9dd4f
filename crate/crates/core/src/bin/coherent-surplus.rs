fn main() {
    std::process::exit(coherent_surplus::cli::main_with_args(std::env::args_os()));
}
