fn main() {
    std::process::exit(rgg_cli::run(std::env::args_os()));
}
