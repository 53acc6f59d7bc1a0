fn main() {
    std::process::exit(milne_zeta::cli::run(std::env::args_os()));
}
