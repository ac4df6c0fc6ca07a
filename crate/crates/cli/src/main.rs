use clap::Parser;
use hopf3_cli::{run, Cli};
use std::io::Write;

fn main() {
    let cli = Cli::parse();
    let out = run(&cli);
    std::io::stdout().write_all(out.stdout.as_bytes()).expect("stdout");
    std::io::stderr().write_all(out.stderr.as_bytes()).expect("stderr");
    std::process::exit(out.code);
}
