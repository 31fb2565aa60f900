use clap::Parser;

fn main() {
    let cli = morsel::cli::Cli::parse();
    if let Err(e) = morsel::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
