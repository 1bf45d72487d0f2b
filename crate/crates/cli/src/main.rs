use clap::Parser;

fn main() {
    let cli = trimode_cli::Cli::parse();
    if let Err(e) = trimode_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
