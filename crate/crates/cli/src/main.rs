fn main() {
    std::process::exit(rotnd::cli::run_process());
}
