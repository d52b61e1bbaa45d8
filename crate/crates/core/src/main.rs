fn main() {
    std::process::exit(fhit::cli::cli_dispatch(std::env::args_os()));
}
