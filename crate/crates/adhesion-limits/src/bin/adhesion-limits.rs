fn main() {
    std::process::exit(adhesion_limits::cli::run(std::env::args_os()));
}
