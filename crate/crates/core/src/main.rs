fn main() {
    std::process::exit(fastforward::cli::main_with_args(std::env::args_os()));
}
