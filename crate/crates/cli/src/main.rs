use clap::Parser;
use surface_modes_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        eprintln!("surface-modes: {err}");
        std::process::exit(err.exit_code());
    }
}
