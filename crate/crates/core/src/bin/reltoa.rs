fn main() {
    std::process::exit(reltoa::cli::main_with_args(std::env::args_os()));
}
