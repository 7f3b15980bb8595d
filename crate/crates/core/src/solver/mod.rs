//! The proximal gradient operator and the PGM / FISTA iterations.
//!
//! FISTA, with `y_0 = x_0`:
//!
//! ```text
//! x_{k+1} = T y_k
//! y_{k+1} = x_{k+1} + ((t_k - 1) / t_{k+1}) (x_{k+1} - x_k)
//! z_k     = (1 - t_k) x_k + t_k y_k
//! ```
//!
//! Every run records a full [`Trace`]; the identities tying `x`, `y`, `z`
//! together are evaluated while iterating, so they are available even when
//! vector snapshots are sparse.

pub mod audit;
mod trace;

pub use trace::{fmt17, IterateRecord, IterateState, Method, Trace};

use crate::error::{Error, Result};
use crate::problem::CompositeProblem;
use crate::schedule::{validate_schedule, Schedule};
use crate::vector::Vector;

/// `T = Prox_{g/beta} o (Id - grad f / beta)`.
pub fn t_operator(problem: &CompositeProblem, y: &Vector) -> Result<Vector> {
    y.ensure_dim(problem.dim())?;
    y.ensure_finite()?;
    let step = 1.0 / problem.beta();
    let grad = problem.smooth().gradient(y);
    let forward = Vector::lincomb(1.0, y, -step, &grad);
    Ok(problem.nonsmooth().prox(&forward, step))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Keep `x, y, z` on rows with `k % snapshot_every == 0` (and the last row).
    pub snapshot_every: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { snapshot_every: 1 }
    }
}

/// Proximal gradient method `x_{k+1} = T x_k`, `K` steps.
pub fn pgm_run(
    problem: &CompositeProblem,
    x0: &Vector,
    iterations: usize,
    s_refs: &[Vector],
    opts: RunOptions,
) -> Result<Trace> {
    // PGM is FISTA with t_k == 1: no extrapolation, y = z = x.
    let ts = vec![1.0; iterations + 1];
    iterate(problem, x0, &ts, iterations, s_refs, opts, Method::Pgm, "pgm".into())
}

/// FISTA with parameter sequence `schedule`, `K` steps.
///
/// The schedule is certified over `t_0..=t_K` before the first step.
pub fn fista_run(
    problem: &CompositeProblem,
    x0: &Vector,
    schedule: &mut Schedule,
    iterations: usize,
    s_refs: &[Vector],
    opts: RunOptions,
) -> Result<Trace> {
    run_accelerated(problem, x0, schedule, iterations, s_refs, opts, Method::Fista)
}

/// Nesterov's accelerated gradient: FISTA for `g == 0`.
pub fn nesterov_run(
    problem: &CompositeProblem,
    x0: &Vector,
    schedule: &mut Schedule,
    iterations: usize,
    s_refs: &[Vector],
    opts: RunOptions,
) -> Result<Trace> {
    if !problem.nonsmooth().is_zero() {
        return Err(Error::InvalidArgument(
            "nesterov_run requires g == 0".into(),
        ));
    }
    run_accelerated(problem, x0, schedule, iterations, s_refs, opts, Method::Nesterov)
}

fn run_accelerated(
    problem: &CompositeProblem,
    x0: &Vector,
    schedule: &mut Schedule,
    iterations: usize,
    s_refs: &[Vector],
    opts: RunOptions,
    method: Method,
) -> Result<Trace> {
    let schedule_id = schedule.id();
    let ts = schedule.prefix(iterations)?;
    let report = validate_schedule(ts)?;
    if !report.is_valid() {
        let first = report
            .growth_violations
            .first()
            .map(|v| format!("growth fails at k = {}", v.k))
            .or_else(|| {
                report
                    .coupling_violations
                    .first()
                    .map(|v| format!("coupling fails at k = {}", v.k))
            })
            .unwrap_or_default();
        return Err(Error::InvalidSchedule(first));
    }
    iterate(problem, x0, ts, iterations, s_refs, opts, method, schedule_id)
}

#[allow(clippy::too_many_arguments)]
fn iterate(
    problem: &CompositeProblem,
    x0: &Vector,
    ts: &[f64],
    iterations: usize,
    s_refs: &[Vector],
    opts: RunOptions,
    method: Method,
    schedule_id: String,
) -> Result<Trace> {
    if iterations == 0 {
        return Err(Error::InvalidArgument("iterations must be >= 1".into()));
    }
    if opts.snapshot_every == 0 {
        return Err(Error::InvalidArgument("snapshot_every must be >= 1".into()));
    }
    x0.ensure_dim(problem.dim())?;
    x0.ensure_finite()?;
    for s in s_refs {
        s.ensure_dim(problem.dim())?;
    }

    let mut trace = Trace {
        method,
        problem_id: problem.id().to_string(),
        schedule_id,
        beta: problem.beta(),
        mu: problem.mu(),
        x0: x0.clone(),
        s_refs: s_refs.to_vec(),
        snapshot_every: opts.snapshot_every,
        records: Vec::with_capacity(iterations + 1),
    };
    let builder = RowBuilder { problem, s_refs };

    let mut prev = IterateState {
        x: x0.clone(),
        y: x0.clone(),
        z: x0.clone(),
    };
    let mut prev_fx = problem.eval(x0)?;
    trace.records.push(builder.initial(&prev, ts[0], prev_fx));

    for k in 0..iterations {
        let x = t_operator(problem, &prev.y)?;
        let momentum = (ts[k] - 1.0) / ts[k + 1];
        let y = Vector::lincomb(1.0 + momentum, &x, -momentum, &prev.x);
        let z = Vector::lincomb(1.0 - ts[k + 1], &x, ts[k + 1], &y);
        let next = IterateState { x, y, z };
        let fx = problem.eval(&next.x)?;
        let mut row = builder.row(k + 1, &prev, prev_fx, ts[k], &next, ts[k + 1], fx);
        let finite = next.x.is_finite() && next.y.is_finite() && !fx.is_nan();

        // The newest row always holds its vectors; the previous one keeps
        // them only on the snapshot grid.
        if let Some(last) = trace.records.last_mut() {
            if last.k % opts.snapshot_every != 0 {
                last.state = None;
            }
        }
        row.state = Some(next.clone());
        trace.records.push(row);
        if !finite {
            return Err(Error::NonFiniteIterate {
                k: k + 1,
                trace: Box::new(trace),
            });
        }
        prev = next;
        prev_fx = fx;
    }
    Ok(trace)
}

struct RowBuilder<'a> {
    problem: &'a CompositeProblem,
    s_refs: &'a [Vector],
}

impl RowBuilder<'_> {
    fn initial(&self, s: &IterateState, t0: f64, fx: f64) -> IterateRecord {
        let res_z = s.z.dist(&s.x) / s.x.norm().max(1.0);
        IterateRecord {
            k: 0,
            t: t0,
            fx,
            delta: self.problem.mu().map(|mu| gap(fx, mu)),
            xi: vec![None; self.s_refs.len()],
            res_zdef: res_z,
            res_convex: 0.0,
            res_ydef: ydef_residual(s, t0),
            res_suffdec: None,
            gap_xy: s.y.dist(&s.x),
            norm_x: s.x.norm(),
            norm_z: s.z.norm(),
            state: Some(s.clone()),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn row(
        &self,
        k: usize,
        prev: &IterateState,
        prev_fx: f64,
        t_prev: f64,
        cur: &IterateState,
        t: f64,
        fx: f64,
    ) -> IterateRecord {
        let beta = self.problem.beta();
        let delta = self.problem.mu().map(|mu| gap(fx, mu));
        let xi = self
            .s_refs
            .iter()
            .map(|s| delta.map(|d| t_prev * t_prev * d + 0.5 * beta * cur.z.dist_sq(s)))
            .collect();

        // z_k = (1 - t_{k-1}) x_{k-1} + t_{k-1} x_k
        let z_alt = Vector::lincomb(1.0 - t_prev, &prev.x, t_prev, &cur.x);
        let z_scale = ((t_prev - 1.0).abs() * prev.x.norm() + t_prev * cur.x.norm()).max(1.0);
        let res_zdef = cur.z.dist(&z_alt) / z_scale;

        // x_k = (1 - 1/t_{k-1}) x_{k-1} + (1/t_{k-1}) z_k
        let x_alt = Vector::lincomb(1.0 - 1.0 / t_prev, &prev.x, 1.0 / t_prev, &cur.z);
        let x_scale = (prev.x.norm() + cur.z.norm() / t_prev).max(1.0);
        let res_convex = cur.x.dist(&x_alt) / x_scale;

        // F(x) - F(y+) >= beta/2 |x - y+|^2 - beta/2 |x - y|^2 with x = x_{k-1},
        // y = y_{k-1}, y+ = x_k
        let res_suffdec = prev_fx.is_finite().then(|| {
            prev_fx - fx - 0.5 * beta * (prev.x.dist_sq(&cur.x) - prev.x.dist_sq(&prev.y))
        });

        IterateRecord {
            k,
            t,
            fx,
            delta,
            xi,
            res_zdef,
            res_convex,
            res_ydef: ydef_residual(cur, t),
            res_suffdec,
            gap_xy: cur.y.dist(&cur.x),
            norm_x: cur.x.norm(),
            norm_z: cur.z.norm(),
            state: None,
        }
    }
}

fn gap(fx: f64, mu: f64) -> f64 {
    if fx == f64::INFINITY {
        f64::INFINITY
    } else {
        fx - mu
    }
}

/// `y_k` against `(1 - 1/t_k) x_k + (1/t_k) z_k`.
fn ydef_residual(s: &IterateState, t: f64) -> f64 {
    let y_alt = Vector::lincomb(1.0 - 1.0 / t, &s.x, 1.0 / t, &s.z);
    s.y.dist(&y_alt) / (s.x.norm() + s.z.norm() / t).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{feasibility_plane, quadratic, Quadratic};

    fn v(a: f64, b: f64) -> Vector {
        Vector::from([a, b])
    }

    #[test]
    fn t_operator_examples() {
        let p = feasibility_plane();
        assert!(t_operator(&p, &v(5.0, 0.0)).unwrap().dist(&v(3.0, -2.0)) < 1e-15);
        assert!(t_operator(&p, &v(3.0, -2.0)).unwrap().dist(&v(2.0, -1.0)) < 1e-15);
        let q = quadratic(Quadratic::diagonal(&[1.0, 1.0], Vector::zeros(2)).unwrap()).unwrap();
        assert_eq!(t_operator(&q, &v(-7.0, 3.5)).unwrap(), Vector::zeros(2));
        assert!(t_operator(&p, &v(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn pgm_first_iterates() {
        let p = feasibility_plane();
        let tr = pgm_run(&p, &v(5.0, 0.0), 40, &[], RunOptions::default()).unwrap();
        let want = [(5.0, 0.0), (3.0, -2.0), (2.0, -1.0), (1.5, -0.5), (1.25, -0.25)];
        for (k, &(a, b)) in want.iter().enumerate() {
            assert!(tr.records[k].x().unwrap().dist(&v(a, b)) < 1e-14, "k = {k}");
        }
        assert!(tr.final_x().dist(&v(1.0, 0.0)) <= 1e-6);
    }

    #[test]
    fn pgm_fixed_point_is_constant() {
        let p = feasibility_plane();
        let s = v(0.25, 0.75);
        let tr = pgm_run(&p, &s, 10, &[], RunOptions::default()).unwrap();
        assert!(tr.records.iter().all(|r| r.x().unwrap().dist(&s) < 1e-15));
    }

    #[test]
    fn fista_first_iterates() {
        let p = feasibility_plane();
        let mut bt = Schedule::beck_teboulle();
        let tr = fista_run(&p, &v(5.0, 0.0), &mut bt, 5, &[], RunOptions::default()).unwrap();
        let r1 = &tr.records[1];
        assert!(r1.x().unwrap().dist(&v(3.0, -2.0)) < 1e-15);
        assert_eq!(r1.x(), r1.y());
        assert!(tr.records[2].x().unwrap().dist(&v(2.0, -1.0)) < 1e-15);
        assert_eq!(tr.records[0].delta, Some(f64::INFINITY));
        assert!(tr.records[0].xi.is_empty());
    }

    #[test]
    fn invalid_schedule_rejected_before_iterating() {
        let p = feasibility_plane();
        let mut ones = Schedule::explicit(vec![1.0; 11]);
        let err = fista_run(&p, &v(5.0, 0.0), &mut ones, 10, &[], RunOptions::default());
        assert!(matches!(err, Err(Error::InvalidSchedule(_))));
        let mut short = Schedule::explicit(vec![1.0, 1.5]);
        assert!(fista_run(&p, &v(5.0, 0.0), &mut short, 10, &[], RunOptions::default()).is_err());
        let mut bt = Schedule::beck_teboulle();
        assert!(fista_run(&p, &v(5.0, 0.0), &mut bt, 0, &[], RunOptions::default()).is_err());
    }

    #[test]
    fn nesterov_requires_smooth_problem() {
        let p = feasibility_plane();
        let mut bt = Schedule::beck_teboulle();
        assert!(nesterov_run(&p, &v(1.0, 1.0), &mut bt, 3, &[], RunOptions::default()).is_err());

        let q = quadratic(Quadratic::diagonal(&[1.0], Vector::zeros(1)).unwrap()).unwrap();
        let tr = nesterov_run(&q, &Vector::from([1.0]), &mut bt, 5, &[], RunOptions::default())
            .unwrap();
        for r in &tr.records[1..] {
            assert_eq!(r.x().unwrap()[0], 0.0);
        }
    }

    #[test]
    fn sparse_snapshots() {
        let p = feasibility_plane();
        let mut bt = Schedule::beck_teboulle();
        let tr = fista_run(&p, &v(5.0, 0.0), &mut bt, 25, &[], RunOptions { snapshot_every: 10 })
            .unwrap();
        let kept: Vec<usize> = tr.records.iter().filter(|r| r.state.is_some()).map(|r| r.k).collect();
        assert_eq!(kept, vec![0, 10, 20, 25]);
        assert!(matches!(tr.states(), Err(Error::MissingSnapshots { k: 1 })));
    }

    #[test]
    fn non_finite_iterate_aborts_with_rows() {
        // gradient blows up: declared beta far too small for the curvature
        let q = crate::problem::CompositeProblem::new(
            "unstable",
            1,
            Box::new(Quadratic::new(vec![1e200], Vector::zeros(1), 1e-200).unwrap()),
            Box::new(crate::families::Zero),
        )
        .unwrap();
        match pgm_run(&q, &Vector::from([1.0]), 50, &[], RunOptions::default()) {
            Err(Error::NonFiniteIterate { k, trace }) => {
                assert_eq!(trace.last().k, k);
                assert!(trace.last().x().is_some());
            }
            other => panic!("expected abort, got {other:?}"),
        }
    }
}
