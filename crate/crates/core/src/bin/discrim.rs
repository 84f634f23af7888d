fn main() {
    std::process::exit(discrim::cli::run(std::env::args_os()));
}
