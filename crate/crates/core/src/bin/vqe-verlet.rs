fn main() {
    std::process::exit(vqe_verlet::harness::cli::main_with_args(std::env::args_os()));
}
