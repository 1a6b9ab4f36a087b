fn main() {
    std::process::exit(mbtrap::cli::run(std::env::args_os()));
}
