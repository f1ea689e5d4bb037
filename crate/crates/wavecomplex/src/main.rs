fn main() {
    std::process::exit(wavecomplex::cli::run(std::env::args_os()));
}
