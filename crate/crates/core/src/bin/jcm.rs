fn main() {
    std::process::exit(jcm_core::cli::main_with_args(std::env::args_os()));
}
