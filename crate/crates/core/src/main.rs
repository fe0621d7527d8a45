fn main() {
    std::process::exit(planar_mhd::cli::main_with_args(std::env::args_os()));
}
