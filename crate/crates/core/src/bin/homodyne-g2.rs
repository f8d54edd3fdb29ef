fn main() {
    std::process::exit(homodyne_g2::cli::main_with_args(std::env::args_os().collect()));
}
