fn main() {
    std::process::exit(termboost::cli::run(std::env::args_os()));
}
