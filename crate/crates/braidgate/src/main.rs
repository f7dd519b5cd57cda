fn main() {
    std::process::exit(braidgate::cli_main());
}
