fn main() {
    if let Err(e) = jrc_cli::run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
