fn main() {
    std::process::exit(dip_cli::dispatch(std::env::args().collect()));
}
