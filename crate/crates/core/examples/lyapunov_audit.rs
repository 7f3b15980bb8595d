//! Audits one FISTA trace: rate bound, the Lyapunov chain for three reference
//! solutions, the x/y/z identities, sufficient decrease and boundedness.
//! Also writes the trace as CSV to `target/lyapunov_trace.csv`.

use std::fs::File;
use std::io::BufWriter;

use fista_lab::families::feasibility_plane;
use fista_lab::schedule::Schedule;
use fista_lab::solver::{audit, fista_run, RunOptions};
use fista_lab::Vector;

fn main() -> fista_lab::Result<()> {
    let plane = feasibility_plane();
    let s_refs = [
        Vector::from([0.0, 1.0]),
        Vector::from([1.0, 0.0]),
        Vector::from([0.5, 0.5]),
    ];
    let trace = fista_run(&plane, &Vector::from([5.0, 0.0]), &mut Schedule::beck_teboulle(), 10_000, &s_refs, RunOptions::default())?;

    let mut reports = vec![audit::rate_bound(&trace, &plane).expect("known optimal value")];
    reports.extend(audit::lyapunov(&trace));
    reports.extend(audit::structural(&trace));
    reports.extend(audit::sufficient_decrease_along_trace(&trace));
    reports.push(audit::boundedness(&trace));
    reports.extend(audit::vanishing_gap(&trace));
    for r in &reports {
        println!("{}", r.line());
    }

    std::fs::create_dir_all("target")?;
    trace.write_csv(BufWriter::new(File::create("target/lyapunov_trace.csv")?))?;
    Ok(())
}
