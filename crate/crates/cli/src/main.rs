fn main() {
    std::process::exit(randlab_cli::dispatch(std::env::args_os()));
}
