//! Drive the command-line front end in-process and capture its report.

use clap::Parser;
use cdmn::cli::{run, Cli};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/models/shopping.cdmn");
    let cli = Cli::parse_from(["cdmn", "solve", path, "--format", "json"]);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&cli, &mut out, &mut err);
    println!("exit {code}");
    print!("{}", String::from_utf8_lossy(&out));
}
