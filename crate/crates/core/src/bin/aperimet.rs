fn main() {
    std::process::exit(aperimet::run::main_with_args(std::env::args_os()));
}
