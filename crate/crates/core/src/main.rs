fn main() {
    std::process::exit(farmroute::cli::run(std::env::args_os()));
}
