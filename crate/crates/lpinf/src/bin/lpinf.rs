use std::io::Write;

use clap::Parser;

use lpinf::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let report = run(&cli);
    // a closed pipe downstream is not an error of ours
    let _ = std::io::stdout().write_all(report.render().as_bytes());
    if let Some(w) = &report.witness {
        let _ = writeln!(std::io::stderr(), "{}: {w}", report.status);
    }
    std::process::exit(report.exit_code);
}
