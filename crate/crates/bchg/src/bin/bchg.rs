fn main() {
    std::process::exit(bchg::cli::main());
}
