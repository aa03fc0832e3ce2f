fn main() {
    std::process::exit(mapface::cli::run(std::env::args_os()));
}
