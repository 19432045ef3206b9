fn main() {
    std::process::exit(fgwitness::cli::run(std::env::args()));
}
