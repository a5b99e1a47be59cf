fn main() {
    std::process::exit(zpf_oscillator::cli::main_with_args(std::env::args_os()));
}
