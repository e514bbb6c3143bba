use clap::Parser;

use arctan_flow::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let outcome = run(&cli.command);
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
    }
    std::process::exit(outcome.manifest.exit_status);
}
