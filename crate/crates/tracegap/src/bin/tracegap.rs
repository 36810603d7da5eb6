fn main() {
    std::process::exit(tracegap::cli::run());
}
