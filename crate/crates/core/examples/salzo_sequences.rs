//! Tail-window verdicts standing in for weak convergence: inner products of
//! the iterates with differences of reference solutions, differences of the
//! Lyapunov values, and the projection onto the span of those differences.

use fista_lab::diagnostics::{salzo_check, span_projection, vector_verdict, xi_difference_check};
use fista_lab::families::feasibility_plane;
use fista_lab::schedule::Schedule;
use fista_lab::solver::{fista_run, RunOptions};
use fista_lab::Vector;

fn main() -> fista_lab::Result<()> {
    let s = [Vector::from([0.0, 1.0]), Vector::from([1.0, 0.0])];
    let trace = fista_run(&feasibility_plane(), &Vector::from([5.0, 0.0]), &mut Schedule::beck_teboulle(), 100_000, &s, RunOptions::default())?;

    let salzo = salzo_check(&trace, &[(s[0].clone(), s[1].clone())], 100, 1e-3)?;
    println!("{}", salzo.verdicts[0].report("<x_k, s0 - s1>").line());
    println!("{}", xi_difference_check(&trace, 0, 1, 100, 1e-6)?.report("xi_k(s0) - xi_k(s1)").line());

    let xs: Vec<Vector> = trace.states()?.iter().map(|st| st.x.clone()).collect();
    let projected = span_projection(&[&s[0] - &s[1]], &xs)?;
    let v = vector_verdict(&projected, 100, 1e-3)?;
    println!(
        "P_Y x_k: converged={} oscillation={:.2e} limit=({:.6}, {:.6})",
        v.converged, v.tail_oscillation, v.limit_estimate[0], v.limit_estimate[1]
    );
    Ok(())
}
