fn main() {
    std::process::exit(weilbench::cli::main());
}
