fn main() {
    std::process::exit(decoherence_lab::harness::cli::run(std::env::args_os()));
}
