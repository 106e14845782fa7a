fn main() {
    std::process::exit(h3::cli::run(std::env::args_os()));
}
