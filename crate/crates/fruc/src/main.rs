fn main() {
    std::process::exit(fruc::cli::main_with_args(std::env::args_os()));
}
