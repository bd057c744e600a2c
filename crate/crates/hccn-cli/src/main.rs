fn main() {
    std::process::exit(hccn_cli::run());
}
