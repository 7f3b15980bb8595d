//! Checks of the inequalities and identities a FISTA trace must satisfy.
//!
//! Tolerances scale with `max(1, magnitude)` of the quantities compared;
//! the underlying statements are exact, so any excess beyond roundoff is a
//! genuine violation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{t_operator, Method, Trace};
use crate::error::{Error, Result};
use crate::problem::CompositeProblem;
use crate::report::CheckReport;
use crate::vector::Vector;

/// Tolerance for the exact algebraic identities between `x`, `y`, `z`.
pub const IDENTITY_TOL: f64 = 1e-9;

/// `delta_k <= 2 beta dist^2(x0, S) / (k + 1)^2` for every row `k >= 1`; PGM
/// traces get the weaker `beta dist^2(x0, S) / (2k)`.
///
/// Returns `None` when the problem has
/// no known optimal value. Without a closed-form solution set, `dist(x0, S)` is
/// replaced by `|x0 - s_ref|`, which the bound also satisfies; the report is
/// flagged accordingly.
pub fn rate_bound(trace: &Trace, problem: &CompositeProblem) -> Option<CheckReport> {
    let solution = problem.solution()?;
    let beta = trace.beta;
    let (d2, exact) = solution.dist_sq_to_set(&trace.x0);
    let tol = 1e-9 * (beta * trace.x0.norm_sq()).max(1.0);
    let worst = trace
        .records
        .iter()
        .skip(1)
        .filter_map(|r| {
            let k = r.k as f64;
            let bound = match trace.method {
                Method::Pgm => beta * d2 / (2.0 * k),
                _ => 2.0 * beta * d2 / ((k + 1.0).powi(2)),
            };
            r.delta.map(|d| d - bound)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let report = CheckReport::bound("rate_bound", worst, tol);
    Some(if exact {
        report
    } else {
        report.with_note("dist(x0, S) replaced by |x0 - s_ref|")
    })
}

/// The Lyapunov chain `0 <= xi_{k+1} <= xi_k <= xi_1 <= beta/2 |x0 - s|^2`
/// for each reference solution of the trace.
///
/// `xi_k` carries the rounding error of `F(x_k) - mu` scaled by `t_{k-1}^2`;
/// each row's residual is reduced by `4 eps |mu| t_{k-1}^2` before comparison
/// with the fixed tolerances. With `mu = 0` the allowance vanishes.
pub fn lyapunov(trace: &Trace) -> Vec<CheckReport> {
    let mut out = Vec::new();
    if trace.len() < 2 {
        return out;
    }
    let mu = trace.mu.unwrap_or(0.0).abs();
    let allowance: Vec<f64> = trace.records[..trace.len() - 1]
        .iter()
        .map(|r| 4.0 * f64::EPSILON * mu * r.t * r.t)
        .collect();
    for (i, s) in trace.s_refs.iter().enumerate() {
        let xs: Vec<f64> = trace.records[1..].iter().filter_map(|r| r.xi[i]).collect();
        if xs.len() + 1 != trace.len() {
            continue;
        }
        let xi1 = xs[0];
        let rise = (1..xs.len())
            .map(|k| xs[k] - xs[k - 1] - allowance[k] - allowance[k - 1])
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(CheckReport::bound(
            format!("lyapunov_monotone[s{i}]"),
            rise,
            1e-9 * xi1.abs().max(1.0),
        ));
        out.push(CheckReport::bound(
            format!("lyapunov_initial[s{i}]"),
            xi1 - 0.5 * trace.beta * trace.x0.dist_sq(s) - allowance[0],
            1e-9,
        ));
        out.push(CheckReport::bound(
            format!("lyapunov_nonnegative[s{i}]"),
            xs.iter()
                .zip(&allowance)
                .map(|(x, a)| -x - a)
                .fold(f64::NEG_INFINITY, f64::max),
            1e-10,
        ));
    }
    out
}

/// Maximum relative residual of the three `x`/`y`/`z` identities.
pub fn structural(trace: &Trace) -> Vec<CheckReport> {
    let max = |f: fn(&super::IterateRecord) -> f64| {
        trace.records.iter().map(f).fold(0.0, f64::max)
    };
    vec![
        CheckReport::bound("z_identity", max(|r| r.res_zdef), IDENTITY_TOL),
        CheckReport::bound("convex_combination", max(|r| r.res_convex), IDENTITY_TOL),
        CheckReport::bound("y_identity", max(|r| r.res_ydef), IDENTITY_TOL),
    ]
}

/// Sufficient decrease along the trace itself (probe `x_{k-1}`).
pub fn sufficient_decrease_along_trace(trace: &Trace) -> Option<CheckReport> {
    let worst = trace
        .records
        .iter()
        .filter_map(|r| r.res_suffdec)
        .map(|s| -s)
        .reduce(f64::max)?;
    Some(CheckReport::bound("sufficient_decrease_trace", worst, 1e-9))
}

/// `F(x) - F(Ty) >= beta/2 |x - Ty|^2 - beta/2 |x - y|^2` for every probe `x`
/// with `F(x) < inf` and every `y = y_k`, `k` in `rows`.
pub fn sufficient_decrease(
    problem: &CompositeProblem,
    trace: &Trace,
    probes: &[Vector],
    rows: &[usize],
) -> Result<CheckReport> {
    let beta = problem.beta();
    let finite: Vec<(&Vector, f64)> = probes
        .iter()
        .map(|x| problem.eval(x).map(|fx| (x, fx)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, fx)| fx.is_finite())
        .collect();
    if finite.is_empty() {
        return Err(Error::InvalidArgument("no probe lies in dom F".into()));
    }
    let mut worst = f64::NEG_INFINITY;
    for &k in rows {
        let y = &trace.state(k)?.y;
        let y_plus = t_operator(problem, y)?;
        let f_plus = problem.eval(&y_plus)?;
        for &(x, fx) in &finite {
            let slack = fx - f_plus - 0.5 * beta * (x.dist_sq(&y_plus) - x.dist_sq(y));
            worst = worst.max(-slack);
        }
    }
    Ok(CheckReport::bound("sufficient_decrease", worst, 1e-9).with_note(format!(
        "{} probes x {} iteration points",
        finite.len(),
        rows.len()
    )))
}

/// `n` seeded probes in `dom F`: images under `T` of uniform points in the box
/// `center +- radius`.
pub fn domain_probes(
    problem: &CompositeProblem,
    center: &Vector,
    radius: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<Vector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let p: Vec<f64> = center
                .iter()
                .map(|c| c + rng.gen_range(-radius..=radius))
                .collect();
            t_operator(problem, &Vector::from(p))
        })
        .collect()
}

/// `sup |x_k| <= max(|x_0|, sup |z_k|)`.
pub fn boundedness(trace: &Trace) -> CheckReport {
    let sup_x = trace.records.iter().map(|r| r.norm_x).fold(0.0, f64::max);
    let sup_z = trace.records.iter().map(|r| r.norm_z).fold(0.0, f64::max);
    CheckReport::bound("bounded_x", sup_x - trace.x0.norm().max(sup_z), 1e-8)
}

/// `|y_k - x_k| <= (|z_k| + |x_k|) / t_k` rowwise, and the gap's last-decile
/// maximum falls below its first-decile maximum.
pub fn vanishing_gap(trace: &Trace) -> Vec<CheckReport> {
    let rowwise = trace
        .records
        .iter()
        .map(|r| {
            let bound = (r.norm_z + r.norm_x) / r.t;
            (r.gap_xy - bound) / bound.max(1.0)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out = vec![CheckReport::bound("gap_xy_rowwise", rowwise, IDENTITY_TOL)];
    let decile = trace.len() / 10;
    if decile >= 1 {
        let head = trace.records[..decile].iter().map(|r| r.gap_xy).fold(0.0, f64::max);
        let tail = trace.records[trace.len() - decile..]
            .iter()
            .map(|r| r.gap_xy)
            .fold(0.0, f64::max);
        let ratio = if head > 0.0 { tail / head } else if tail > 0.0 { f64::INFINITY } else { 0.0 };
        out.push(CheckReport {
            claim: "gap_xy_decreasing".into(),
            pass: ratio < 1.0 || (head == 0.0 && tail == 0.0),
            residual_or_oscillation: ratio,
            window: Some(decile),
            tol: 1.0,
            note: Some("last-decile max / first-decile max".into()),
        });
    }
    out
}

/// `|x_K - target| <= tol`.
pub fn final_distance(trace: &Trace, target: &Vector, tol: f64) -> CheckReport {
    CheckReport::bound("final_point", trace.final_x().dist(target), tol)
}
