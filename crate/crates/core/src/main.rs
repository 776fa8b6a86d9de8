fn main() {
    std::process::exit(g2quat::cli::run());
}
