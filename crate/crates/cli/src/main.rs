fn main() {
    std::process::exit(sagan_cli::run());
}
