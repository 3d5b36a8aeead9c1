fn main() {
    std::process::exit(dfm::cli::run());
}
