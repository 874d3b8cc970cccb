fn main() {
    std::process::exit(priorinfo::cli::run(std::env::args_os()));
}
