fn main() {
    std::process::exit(osc_positivity::cli::main_with_args(std::env::args_os()));
}
