fn main() {
    env_logger::init();
    std::process::exit(factorix::cli::run(std::env::args_os()));
}
