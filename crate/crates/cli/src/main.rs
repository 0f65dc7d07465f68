fn main() {
    std::process::exit(dmexp_cli::run(std::env::args_os()));
}
