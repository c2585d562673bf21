//! Drive the command-line front end in-process, as `orbijac verify` would.
use orbijac::cli::{run, Cli, RunConfig};
use clap::Parser;

fn main() -> orbijac::Result<()> {
    let cfg = RunConfig::from_cli(Cli::parse_from(["orbijac", "verify", "--abc", "3,3,3", "--prec", "200", "--seed", "3"]))?;
    let out = run(&cfg)?;
    for c in &out.checks {
        println!("{:<12} {}", c.name, if c.pass { "ok" } else { "FAILED" });
    }
    println!("first failure: {:?}", out.first_failure());
    Ok(())
}
