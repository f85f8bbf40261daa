fn main() {
    std::process::exit(higgs_harmonic::cli::run(std::env::args_os()));
}
