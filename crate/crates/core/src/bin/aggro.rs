fn main() {
    std::process::exit(aggro::app::run(std::env::args_os()));
}
