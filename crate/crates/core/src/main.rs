fn main() {
    std::process::exit(radial_ld::cli::run(std::env::args_os()));
}
