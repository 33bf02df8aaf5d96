fn main() {
    std::process::exit(jmetric::cli::run(std::env::args_os()));
}
