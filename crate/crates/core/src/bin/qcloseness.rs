fn main() {
    std::process::exit(qcloseness::cli::main_with_args(std::env::args_os()));
}
