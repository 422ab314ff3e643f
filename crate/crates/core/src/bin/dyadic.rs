fn main() {
    std::process::exit(dyadic::cli::main_with_args(std::env::args_os()));
}
