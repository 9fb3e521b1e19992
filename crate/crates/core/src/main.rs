fn main() {
    std::process::exit(cviews::cli::main_with(std::env::args_os()));
}
