use std::io::Write;

use clap::Parser;

use chainmod_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(&cli);
    for d in &out.diagnostics {
        eprintln!("{d}");
    }
    if let Some(report) = &out.report {
        let text = serde_json::to_string_pretty(report).expect("report serializes");
        // A closed pipe downstream is not an error of ours.
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }
    std::process::exit(out.code);
}
