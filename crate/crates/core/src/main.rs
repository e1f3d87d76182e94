fn main() {
    std::process::exit(steplab::harness::run(std::env::args_os()));
}
