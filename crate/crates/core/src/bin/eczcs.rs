fn main() {
    std::process::exit(eczcs::cli::run(std::env::args_os()));
}
