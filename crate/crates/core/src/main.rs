fn main() {
    std::process::exit(avcheck::cli::main());
}
