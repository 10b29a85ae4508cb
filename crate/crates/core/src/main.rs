fn main() {
    std::process::exit(modres::cli::main_with_args(std::env::args_os()));
}
