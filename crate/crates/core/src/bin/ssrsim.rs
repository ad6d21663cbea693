fn main() {
    std::process::exit(ssrsim::cli::main(std::env::args().collect()));
}
