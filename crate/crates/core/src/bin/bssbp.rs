fn main() {
    std::process::exit(bssbp_core::cli::run(std::env::args_os()));
}
