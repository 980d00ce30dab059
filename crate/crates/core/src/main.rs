fn main() {
    std::process::exit(hexfold::cli::run(std::env::args_os()));
}
