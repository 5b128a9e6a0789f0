fn main() {
    std::process::exit(noisy_fourier::cli::main_with_args(std::env::args_os()));
}
