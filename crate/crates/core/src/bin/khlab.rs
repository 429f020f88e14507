fn main() {
    std::process::exit(khlab::cli::main());
}
