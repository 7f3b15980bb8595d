//! Post-hoc analysis of traces.
//!
//! "Converges" is operationalized as a tail-window oscillation proxy: a
//! sequence is declared convergent when `max - min` over its last `window`
//! values is at most `tol`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::solver::Trace;
use crate::vector::Vector;

pub const DEFAULT_WINDOW: usize = 100;
pub const DEFAULT_REL_TOL: f64 = 1e-6;

/// A real sequence indexed from `start`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarSeq {
    pub label: String,
    pub start: usize,
    pub values: Vec<f64>,
}

impl ScalarSeq {
    pub fn new(label: impl Into<String>, start: usize, values: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            start,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at absolute index `k`.
    pub fn at(&self, k: usize) -> Option<f64> {
        k.checked_sub(self.start).and_then(|i| self.values.get(i).copied())
    }

    /// Last absolute index.
    pub fn end(&self) -> usize {
        self.start + self.values.len() - 1
    }

    /// `(k, value)` pairs.
    pub fn indexed(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.start + i, v))
    }

    pub fn map(&self, label: impl Into<String>, f: impl Fn(f64) -> f64) -> Self {
        Self::new(label, self.start, self.values.iter().map(|&v| f(v)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceVerdict {
    pub converged: bool,
    /// Mean of the tail window.
    pub limit_estimate: f64,
    /// `max - min` over the tail window.
    pub tail_oscillation: f64,
    pub window: usize,
    pub tol: f64,
    /// The tail contained an infinite or NaN value.
    pub non_finite: bool,
}

impl ConvergenceVerdict {
    pub fn report(&self, claim: impl Into<String>) -> CheckReport {
        CheckReport {
            claim: claim.into(),
            pass: self.converged,
            residual_or_oscillation: self.tail_oscillation,
            window: Some(self.window),
            tol: self.tol,
            note: Some(format!("limit estimate {:.6e}", self.limit_estimate)),
        }
    }
}

/// Tail-window verdict. Needs `2 <= window <= len / 2`.
pub fn verdict(seq: &ScalarSeq, window: usize, tol: f64) -> Result<ConvergenceVerdict> {
    if window < 2 || window > seq.len() / 2 {
        return Err(Error::InvalidArgument(format!(
            "window {window} must lie in [2, len/2] for a sequence of length {}",
            seq.len()
        )));
    }
    Ok(tail_verdict(&seq.values[seq.len() - window..], tol))
}

/// Verdict over a stream, keeping only the last `window` values.
pub fn stream_verdict(
    values: impl IntoIterator<Item = f64>,
    window: usize,
    tol: f64,
) -> Result<ConvergenceVerdict> {
    if window < 2 {
        return Err(Error::InvalidArgument("window must be >= 2".into()));
    }
    let mut tail = VecDeque::with_capacity(window);
    let mut n = 0usize;
    for v in values {
        if tail.len() == window {
            tail.pop_front();
        }
        tail.push_back(v);
        n += 1;
    }
    if n < 2 * window {
        return Err(Error::InvalidArgument(format!(
            "stream of length {n} too short for window {window}"
        )));
    }
    Ok(tail_verdict(tail.make_contiguous(), tol))
}

fn tail_verdict(tail: &[f64], tol: f64) -> ConvergenceVerdict {
    let window = tail.len();
    if tail.iter().any(|v| !v.is_finite()) {
        return ConvergenceVerdict {
            converged: false,
            limit_estimate: *tail.last().unwrap(),
            tail_oscillation: f64::INFINITY,
            window,
            tol,
            non_finite: true,
        };
    }
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let oscillation = hi - lo;
    ConvergenceVerdict {
        converged: oscillation <= tol,
        limit_estimate: tail.iter().sum::<f64>() / window as f64,
        tail_oscillation: oscillation,
        window,
        tol,
        non_finite: false,
    }
}

/// Which of the three FISTA sequences to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    X,
    Y,
    Z,
}

/// `<w_k, d>` for `w = x, y` or `z`; needs vectors on every row.
pub fn inner_product_seq(trace: &Trace, which: Which, d: &Vector) -> Result<ScalarSeq> {
    d.ensure_finite()?;
    d.ensure_dim(trace.x0.dim())?;
    let values = trace
        .states()?
        .into_iter()
        .map(|s| match which {
            Which::X => s.x.dot(d),
            Which::Y => s.y.dot(d),
            Which::Z => s.z.dot(d),
        })
        .collect();
    Ok(ScalarSeq::new(format!("<{which:?}_k, d>"), 0, values))
}

/// `max_k |g_k - z_dot[k + 1]|` with `g_k = h_{k+1} + (t_k - 1)(h_{k+1} - h_k)`.
///
/// `h`, `t` and `z_dot` share indexing from 0.
pub fn momentum_identity_residual(h: &[f64], t: &[f64], z_dot: &[f64]) -> f64 {
    let n = h.len().min(t.len()).min(z_dot.len());
    (0..n.saturating_sub(1))
        .map(|k| {
            let g = h[k + 1] + (t[k] - 1.0) * (h[k + 1] - h[k]);
            (g - z_dot[k + 1]).abs()
        })
        .fold(0.0, f64::max)
}

/// The transformed sequence of `h_k = <x_k, d>` against `<z_{k+1}, d>`.
///
/// Passes when the residual is within `1e-9 * max(1, |d| sup |x_k|)`.
pub fn check_momentum_identity(trace: &Trace, d: &Vector) -> Result<CheckReport> {
    let h = inner_product_seq(trace, Which::X, d)?;
    let zd = inner_product_seq(trace, Which::Z, d)?;
    let t: Vec<f64> = trace.records.iter().map(|r| r.t).collect();
    let residual = momentum_identity_residual(&h.values, &t, &zd.values);
    let sup_x = trace.records.iter().map(|r| r.norm_x).fold(0.0, f64::max);
    let tol = 1e-9 * (d.norm() * sup_x).max(1.0);
    Ok(CheckReport::bound("momentum_identity", residual, tol))
}

/// Two-pass classical Gram-Schmidt; drops vectors whose residual after
/// orthogonalization is at most `1e-10` of their original norm.
pub fn orthonormal_basis(vectors: &[Vector]) -> Result<Vec<Vector>> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::InvalidArgument("spanning set is empty".into()))?;
    let mut basis: Vec<Vector> = Vec::new();
    for c in vectors {
        c.ensure_dim(first.dim())?;
        c.ensure_finite()?;
        let norm = c.norm();
        let mut r = c.clone();
        for _pass in 0..2 {
            let coeffs: Vec<f64> = basis.iter().map(|q| q.dot(&r)).collect();
            for (q, a) in basis.iter().zip(coeffs) {
                r = Vector::lincomb(1.0, &r, -a, q);
            }
        }
        let rn = r.norm();
        if rn > 1e-10 * norm && rn > 0.0 {
            basis.push(r.scale(1.0 / rn));
        }
    }
    if basis.is_empty() {
        return Err(Error::InvalidArgument("spanning set is all zero".into()));
    }
    Ok(basis)
}

/// Orthogonal projector onto `span C`.
#[derive(Debug, Clone)]
pub struct SpanProjector {
    basis: Vec<Vector>,
}

impl SpanProjector {
    pub fn new(spanning: &[Vector]) -> Result<Self> {
        Ok(Self {
            basis: orthonormal_basis(spanning)?,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn project(&self, x: &Vector) -> Vector {
        self.basis
            .iter()
            .fold(Vector::zeros(x.dim()), |acc, q| Vector::lincomb(1.0, &acc, q.dot(x), q))
    }
}

/// `P_Y x` for each `x`, with `Y = span C`.
pub fn span_projection(spanning: &[Vector], xs: &[Vector]) -> Result<Vec<Vector>> {
    let p = SpanProjector::new(spanning)?;
    xs.iter()
        .map(|x| {
            x.ensure_dim(spanning[0].dim())?;
            Ok(p.project(x))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorVerdict {
    pub converged: bool,
    pub limit_estimate: Vector,
    /// Largest coordinate oscillation.
    pub tail_oscillation: f64,
    pub window: usize,
    pub tol: f64,
}

/// Coordinatewise verdict; converged iff every coordinate is.
pub fn vector_verdict(seq: &[Vector], window: usize, tol: f64) -> Result<VectorVerdict> {
    let dim = seq
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty vector sequence".into()))?
        .dim();
    let mut limit = Vec::with_capacity(dim);
    let mut osc = 0f64;
    let mut converged = true;
    for i in 0..dim {
        let coord = ScalarSeq::new(format!("coord{i}"), 0, seq.iter().map(|v| v[i]).collect());
        let v = verdict(&coord, window, tol)?;
        converged &= v.converged;
        osc = osc.max(v.tail_oscillation);
        limit.push(v.limit_estimate);
    }
    Ok(VectorVerdict {
        converged,
        limit_estimate: limit.into(),
        tail_oscillation: osc,
        window,
        tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SalzoReport {
    pub verdicts: Vec<ConvergenceVerdict>,
    /// All pairwise sequences passed their verdict.
    pub consistent: bool,
}

/// Verdicts on `<x_k, w1 - w2>` for each candidate cluster-point pair.
pub fn salzo_check(
    trace: &Trace,
    pairs: &[(Vector, Vector)],
    window: usize,
    tol: f64,
) -> Result<SalzoReport> {
    let verdicts = pairs
        .iter()
        .map(|(w1, w2)| verdict(&inner_product_seq(trace, Which::X, &(w1 - w2))?, window, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(SalzoReport {
        consistent: verdicts.iter().all(|v| v.converged),
        verdicts,
    })
}

/// `xi_k(s_i) - xi_k(s_j)` for `k >= 1`.
pub fn xi_difference_seq(trace: &Trace, i: usize, j: usize) -> Result<ScalarSeq> {
    let values = trace.records[1..]
        .iter()
        .map(|r| match (r.xi.get(i).copied().flatten(), r.xi.get(j).copied().flatten()) {
            (Some(a), Some(b)) => Ok(a - b),
            _ => Err(Error::InvalidArgument(format!(
                "xi columns s{i}, s{j} unavailable at k = {}",
                r.k
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalarSeq::new(format!("xi(s{i}) - xi(s{j})"), 1, values))
}

/// Verdict on the xi difference with tolerance `rel_tol * max(1, xi_1(s_i))`.
pub fn xi_difference_check(
    trace: &Trace,
    i: usize,
    j: usize,
    window: usize,
    rel_tol: f64,
) -> Result<ConvergenceVerdict> {
    let seq = xi_difference_seq(trace, i, j)?;
    let xi1 = trace.records[1].xi[i].unwrap_or(0.0);
    verdict(&seq, window, rel_tol * xi1.abs().max(1.0))
}
