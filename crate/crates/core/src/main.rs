fn main() {
    std::process::exit(discner::cli::main_with_args(std::env::args_os()));
}
