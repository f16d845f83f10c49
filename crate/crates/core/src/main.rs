fn main() {
    std::process::exit(rctutte::cli::run());
}
