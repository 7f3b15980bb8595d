//! Smooth case (g = 0) on a random strongly convex quadratic: Nesterov's
//! method coincides with FISTA, and both beat the plain gradient step.

use fista_lab::families::random_quadratic;
use fista_lab::schedule::Schedule;
use fista_lab::solver::{nesterov_run, pgm_run, RunOptions};
use fista_lab::Vector;

fn main() -> fista_lab::Result<()> {
    let q = random_quadratic(20, 7, 1e-3, 1.0)?;
    let x0 = Vector::from(vec![1.0; 20]);
    let opts = RunOptions { snapshot_every: 50 };
    let acc = nesterov_run(&q, &x0, &mut Schedule::beck_teboulle(), 500, &[], opts)?;
    let grad = pgm_run(&q, &x0, 500, &[], opts)?;
    println!("{:>5} {:>14} {:>14}", "k", "gap accel", "gap gradient");
    for (a, g) in acc.records.iter().zip(&grad.records).step_by(50) {
        println!("{:>5} {:>14.6e} {:>14.6e}", a.k, a.delta.unwrap_or(f64::NAN), g.delta.unwrap_or(f64::NAN));
    }
    Ok(())
}
