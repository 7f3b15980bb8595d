//! FISTA and PGM from (5, 0) on the planar feasibility problem
//! `min 1/2 dist^2(x, R_+^2)  s.t.  x + y = 1`.
//!
//! FISTA settles at an interior point of the solution segment, PGM at its
//! endpoint (1, 0).

use fista_lab::experiment::repro_fig1;
use fista_lab::families::feasibility_plane;
use fista_lab::schedule::Schedule;
use fista_lab::solver::{fista_run, pgm_run, RunOptions};
use fista_lab::Vector;

fn main() -> fista_lab::Result<()> {
    let plane = feasibility_plane();
    let x0 = Vector::from([5.0, 0.0]);

    let fig = repro_fig1()?;
    println!("first FISTA iterates:");
    for (k, x) in fig.iterates.iter().enumerate().take(8) {
        println!("  x_{k:<2} = ({:+.6}, {:+.6})", x[0], x[1]);
    }

    let fista = fista_run(&plane, &x0, &mut Schedule::beck_teboulle(), 100_000, &[], RunOptions { snapshot_every: 100_000 })?;
    let pgm = pgm_run(&plane, &x0, 40, &[], RunOptions::default())?;
    let (xf, xp) = (fista.final_x(), pgm.final_x());
    println!("FISTA after 1e5 iterations: ({:.6}, {:.6})", xf[0], xf[1]);
    println!("PGM after 40 iterations:    ({:.6}, {:.6})", xp[0], xp[1]);
    Ok(())
}
