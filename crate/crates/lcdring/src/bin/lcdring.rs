fn main() {
    std::process::exit(lcdring::cli::main_entry(std::env::args_os()));
}
