fn main() {
    std::process::exit(cdga::cli::run(std::env::args_os()));
}
