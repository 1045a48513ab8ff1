fn main() {
    std::process::exit(twistcodes::cli::main());
}
