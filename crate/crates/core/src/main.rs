fn main() {
    std::process::exit(orbijac::cli::main_with(std::env::args_os()));
}
