fn main() {
    std::process::exit(qccs::cli::run(std::env::args_os()));
}
