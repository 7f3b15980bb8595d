//! Runs a JSON experiment config in-process and prints its checks.
//!
//! `cargo run --example config_run -- configs/fig1.json`

use std::path::PathBuf;

use fista_lab::experiment::{run, ExperimentConfig};

fn main() -> fista_lab::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "configs/fig1-pgm.json".into());
    let cfg = ExperimentConfig::load(path.as_ref())?;
    let out = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("target/config_run"));
    let report = run(&cfg, &out)?;
    for c in &report.checks {
        println!("{}", c.line());
    }
    println!("{} -> {}", if report.pass { "pass" } else { "fail" }, out.display());
    Ok(())
}
