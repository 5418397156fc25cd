fn main() {
    std::process::exit(trajgrid::cli::main_with(std::env::args_os()));
}
