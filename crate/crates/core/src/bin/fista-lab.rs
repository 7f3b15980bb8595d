//! Command-line front end. Exit status: 0 all checks pass, 1 a check failed,
//! 2 usage or config error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand};
use fista_lab::experiment::{self, AnyConfig};
use fista_lab::{CheckReport, Error};

#[derive(Parser)]
#[command(name = "fista-lab", version, about = "Instrumented FISTA / PGM runs")]
struct Cli {
    /// Where outputs go (overrides the config's output_dir).
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Probe seed (overrides the config's seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Configs run concurrently.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one or more JSON experiment configs.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
    /// Write plot data for the first FISTA iterates on the planar feasibility problem.
    ReproFig1,
    /// Run a scalar-sequence scenario: ex42, ex43, ex44-sinh, linf-plus, linf-minus.
    BcchDemo { name: String, k: usize },
    /// Certify a momentum schedule (bt, linear, constant-ones) up to index K.
    Validate { schedule: String, k: usize },
}

enum Outcome {
    Pass,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NonFiniteIterate { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn print_checks(checks: &[CheckReport]) -> Outcome {
    for c in checks {
        println!("{}", c.line());
    }
    if checks.iter().all(|c| c.pass) {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.cmd {
        Cmd::Run { configs } => run_configs(cli, configs),
        Cmd::ReproFig1 => {
            let dir = cli.output_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
            std::fs::create_dir_all(&dir)?;
            let path = dir.join("fig1_points.dat");
            experiment::repro_fig1()?.write(std::fs::File::create(&path)?)?;
            println!("wrote {}", path.display());
            Ok(Outcome::Pass)
        }
        Cmd::BcchDemo { name, k } => {
            let demo = experiment::bcch_demo(name, *k)?;
            let r = &demo.report;
            println!(
                "{name}: h_K = {:.12}, expected limit {} ({})",
                r.h_last, r.expected_limit.value, r.expected_limit.provenance
            );
            println!(
                "  sum 1/phi = {:.6}, ln prod lambda = {:.6}",
                r.divergence.sum_inv_phi, r.divergence.ln_prod_lambda
            );
            if let Some(dir) = &cli.output_dir {
                std::fs::create_dir_all(dir)?;
                let path = dir.join(format!("bcch_{name}.json"));
                std::fs::write(&path, serde_json::to_string_pretty(&demo)?)?;
            }
            Ok(print_checks(&demo.checks))
        }
        Cmd::Validate { schedule, k } => {
            let v = experiment::validate(schedule, *k)?;
            let c = &v.conditions;
            println!(
                "{schedule}: t_0..t_{k} growth violations {} coupling violations {} \
                 coupling residual in [{:.3e}, {:.3e}]",
                c.growth_violations.len(),
                c.coupling_violations.len(),
                c.min_coupling_residual,
                c.max_coupling_residual
            );
            if let Some(first) = c.growth_violations.first() {
                println!("  first growth violation at k = {}", first.k);
            }
            if let Some(first) = c.coupling_violations.first() {
                println!("  first coupling violation at k = {}", first.k);
            }
            println!(
                "  1 <= t_k - 1 <= k: {} violations, partial sum of 1/(t_k - 1) = {:.6}",
                v.bounds.violations.len(),
                v.bounds.partial_sum
            );
            if let Some(dir) = &cli.output_dir {
                std::fs::create_dir_all(dir)?;
                let path = dir.join(format!("validate_{schedule}.json"));
                std::fs::write(&path, serde_json::to_string_pretty(&v)?)?;
            }
            Ok(if v.valid { Outcome::Pass } else { Outcome::CheckFailed })
        }
    }
}

fn run_configs(cli: &Cli, paths: &[PathBuf]) -> Result<Outcome, Error> {
    let mut loaded = Vec::with_capacity(paths.len());
    for p in paths {
        let mut cfg = AnyConfig::load(p)?;
        if let Some(seed) = cli.seed {
            cfg.set_seed(seed);
        }
        let dir = out_dir_for(cli, &cfg, p, paths.len() > 1);
        loaded.push((p.clone(), cfg, dir));
    }

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<Outcome, Error>>>> =
        Mutex::new((0..loaded.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..cli.jobs.max(1).min(loaded.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some((path, cfg, dir)) = loaded.get(i) else { break };
                let res = run_one(cfg, dir).map(|(checks, skipped)| {
                    let mut text = format!("== {} -> {}\n", path.display(), dir.display());
                    for c in &checks {
                        text.push_str(&c.line());
                        text.push('\n');
                    }
                    for s in &skipped {
                        text.push_str(&format!("SKIP {s}\n"));
                    }
                    print!("{text}");
                    let failing: Vec<&str> =
                        checks.iter().filter(|c| !c.pass).map(|c| c.claim.as_str()).collect();
                    if failing.is_empty() {
                        Outcome::Pass
                    } else {
                        eprintln!("{}: failing checks: {}", path.display(), failing.join(", "));
                        Outcome::CheckFailed
                    }
                });
                results.lock().unwrap()[i] = Some(res);
            });
        }
    });

    let mut overall = Outcome::Pass;
    let mut config_error = None;
    for (res, (path, _, _)) in results.into_inner().unwrap().into_iter().zip(&loaded) {
        match res.expect("every config ran") {
            Ok(Outcome::Pass) => {}
            Ok(Outcome::CheckFailed) => overall = Outcome::CheckFailed,
            Err(e @ Error::NonFiniteIterate { .. }) => {
                eprintln!("{}: {e}", path.display());
                overall = Outcome::CheckFailed;
            }
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                config_error.get_or_insert(e);
            }
        }
    }
    match config_error {
        Some(e) => Err(e),
        None => Ok(overall),
    }
}

fn run_one(cfg: &AnyConfig, dir: &Path) -> Result<(Vec<CheckReport>, Vec<String>), Error> {
    match cfg {
        AnyConfig::Experiment(c) => experiment::run(c, dir).map(|r| (r.checks, r.skipped)),
        AnyConfig::Scenario(c) => experiment::run_scenario(c, dir).map(|d| (d.checks, Vec::new())),
    }
}

fn out_dir_for(cli: &Cli, cfg: &AnyConfig, path: &Path, many: bool) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match (&cli.output_dir, cfg.output_dir()) {
        (Some(d), _) if many => d.join(stem),
        (Some(d), _) => d.clone(),
        (None, Some(d)) => d.clone(),
        (None, None) => PathBuf::from("out").join(stem),
    }
}
