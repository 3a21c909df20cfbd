fn main() {
    std::process::exit(cellcast::cli::dispatch(std::env::args_os()));
}
