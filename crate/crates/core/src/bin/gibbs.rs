fn main() {
    std::process::exit(gibbs_partitions::cli::main_with_args(std::env::args_os()));
}
