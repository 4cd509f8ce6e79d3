fn main() {
    std::process::exit(tsteer::cli::run(std::env::args_os()));
}
