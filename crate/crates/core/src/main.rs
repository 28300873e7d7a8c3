fn main() {
    std::process::exit(irrtorus::cli::main_with_args(std::env::args_os()));
}
