fn main() {
    std::process::exit(kcontact::cli::run(std::env::args().collect()));
}
