//! Separable lasso `1/2 sum d_i (x_i - c_i)^2 + w |x|_1`; the prox step is soft
//! thresholding and the minimizer is known coordinatewise.

use fista_lab::families::l1_separable;
use fista_lab::schedule::Schedule;
use fista_lab::solver::{audit, fista_run, RunOptions};
use fista_lab::Vector;

fn main() -> fista_lab::Result<()> {
    let diag = [1.0, 4.0, 0.25, 2.0, 1.0];
    let center = Vector::from([2.0, -0.1, 0.05, -3.0, 0.4]);
    let p = l1_separable(&diag, center, 0.5)?;
    let s = p.solution().expect("closed form").s_ref.clone();
    let trace = fista_run(&p, &Vector::zeros(5), &mut Schedule::beck_teboulle(), 3000, std::slice::from_ref(&s), RunOptions::default())?;
    println!("minimizer       {:.6?}", s.as_slice());
    println!("FISTA, K = 3000 {:.6?}", trace.final_x().as_slice());
    for r in audit::rate_bound(&trace, &p).into_iter().chain(audit::lyapunov(&trace)) {
        println!("{}", r.line());
    }
    Ok(())
}
