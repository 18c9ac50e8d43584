fn main() {
    std::process::exit(modspace::cli::main_with(std::env::args_os()));
}
