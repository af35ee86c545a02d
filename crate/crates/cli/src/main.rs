fn main() {
    std::process::exit(qwalk::main_with_args(std::env::args_os()));
}
