fn main() {
    std::process::exit(msd_core::cli::main_from_env());
}
