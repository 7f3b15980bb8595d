//! Momentum parameter sequences `(t_k)` and their certification.
//!
//! A valid sequence satisfies, for every `k`,
//!
//! ```text
//! growth:   t_k >= (k + 2) / 2 >= 1 = t_0
//! coupling: t_k^2 >= t_{k+1}^2 - t_{k+1}
//! ```

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack allowed before a coupling residual counts as a violation.
pub const COUPLING_TOL: f64 = 1e-12;

/// The Beck-Teboulle update: the larger root of `t^2 - t - t_k^2 = 0`.
pub fn bt_next(t_k: f64) -> Result<f64> {
    if !(t_k >= 1.0) {
        return Err(Error::InvalidSchedule(format!("bt_next needs t_k >= 1, got {t_k}")));
    }
    Ok((1.0 + (4.0 * t_k * t_k + 1.0).sqrt()) / 2.0)
}

/// `t_0 = 1`, `t_k = (k + 2) / 2` for `k >= 1`.
pub fn linear_half(k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        (k as f64 + 2.0) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleRule {
    BeckTeboulle,
    LinearHalf,
    Explicit(Vec<f64>),
}

/// A parameter sequence with a lazily extended cache `t_0..t_K`.
#[derive(Debug, Clone)]
pub struct Schedule {
    rule: ScheduleRule,
    cache: Vec<f64>,
}

impl Schedule {
    pub fn new(rule: ScheduleRule) -> Self {
        let cache = match &rule {
            ScheduleRule::Explicit(ts) => ts.clone(),
            _ => vec![1.0],
        };
        Self { rule, cache }
    }

    pub fn beck_teboulle() -> Self {
        Self::new(ScheduleRule::BeckTeboulle)
    }

    pub fn linear() -> Self {
        Self::new(ScheduleRule::LinearHalf)
    }

    pub fn explicit(ts: Vec<f64>) -> Self {
        Self::new(ScheduleRule::Explicit(ts))
    }

    pub fn rule(&self) -> &ScheduleRule {
        &self.rule
    }

    /// Short identifier used in traces and reports.
    pub fn id(&self) -> String {
        match &self.rule {
            ScheduleRule::BeckTeboulle => "bt".into(),
            ScheduleRule::LinearHalf => "linear".into(),
            ScheduleRule::Explicit(ts) => format!("explicit[{}]", ts.len()),
        }
    }

    /// `t_0..=t_last`, generating missing terms.
    pub fn prefix(&mut self, last: usize) -> Result<&[f64]> {
        while self.cache.len() <= last {
            let k = self.cache.len();
            let next = match &self.rule {
                ScheduleRule::BeckTeboulle => bt_next(self.cache[k - 1])?,
                ScheduleRule::LinearHalf => linear_half(k),
                ScheduleRule::Explicit(ts) => {
                    return Err(Error::InvalidSchedule(format!(
                        "explicit schedule has {} terms, need {}",
                        ts.len(),
                        last + 1
                    )))
                }
            };
            self.cache.push(next);
        }
        Ok(&self.cache[..=last])
    }

    pub fn t(&mut self, k: usize) -> Result<f64> {
        Ok(self.prefix(k)?[k])
    }
}

/// One failed condition at index `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub k: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleReport {
    pub len: usize,
    /// `t_k - (k + 2) / 2 < 0`, or `t_0 != 1` reported at `k = 0`.
    pub growth_violations: Vec<Violation>,
    /// Relative coupling residual `(t_k^2 - t_{k+1}^2 + t_{k+1}) / max(1, t_{k+1}^2)` below `-COUPLING_TOL`.
    pub coupling_violations: Vec<Violation>,
    pub min_coupling_residual: f64,
    pub max_coupling_residual: f64,
    pub max_abs_coupling_residual: f64,
}

impl ScheduleReport {
    pub fn is_valid(&self) -> bool {
        self.growth_violations.is_empty() && self.coupling_violations.is_empty()
    }
}

/// Relative coupling residual between consecutive terms; zero for Beck-Teboulle.
pub fn coupling_residual(t_k: f64, t_next: f64) -> f64 {
    (t_k * t_k - t_next * (t_next - 1.0)) / (t_next * t_next).max(1.0)
}

/// Checks the growth and coupling conditions over a finite prefix.
pub fn validate_schedule(ts: &[f64]) -> Result<ScheduleReport> {
    if ts.len() < 2 {
        return Err(Error::InvalidArgument(
            "schedule validation needs at least two terms".into(),
        ));
    }
    let mut growth_violations = Vec::new();
    if ts[0] != 1.0 {
        growth_violations.push(Violation {
            k: 0,
            residual: ts[0] - 1.0,
        });
    }
    for (k, &t) in ts.iter().enumerate().skip(1) {
        let residual = t - (k as f64 + 2.0) / 2.0;
        if !(residual >= 0.0) {
            growth_violations.push(Violation { k, residual });
        }
    }
    let mut coupling_violations = Vec::new();
    let (mut lo, mut hi, mut abs) = (f64::INFINITY, f64::NEG_INFINITY, 0f64);
    for (k, w) in ts.windows(2).enumerate() {
        let residual = coupling_residual(w[0], w[1]);
        lo = lo.min(residual);
        hi = hi.max(residual);
        abs = abs.max(residual.abs());
        if !(residual >= -COUPLING_TOL) {
            coupling_violations.push(Violation { k, residual });
        }
    }
    Ok(ScheduleReport {
        len: ts.len(),
        growth_violations,
        coupling_violations,
        min_coupling_residual: lo,
        max_coupling_residual: hi,
        max_abs_coupling_residual: abs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RyuBoundsReport {
    /// Indices `k >= 2` where `1 <= t_k - 1 <= k` fails.
    pub violations: Vec<usize>,
    /// `sum_{k=2}^{K} 1 / (t_k - 1)`.
    pub partial_sum: f64,
    /// `(K, partial sum up to K)` at each power of ten and at the end.
    pub checkpoints: Vec<(usize, f64)>,
}

impl RyuBoundsReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `1 <= t_k - 1 <= k` for `k >= 2` and accumulates `sum 1/(t_k - 1)`.
pub fn ryu_bounds_check(ts: &[f64]) -> Result<RyuBoundsReport> {
    if ts.len() < 3 {
        return Err(Error::InvalidArgument("need t_0..t_2 at least".into()));
    }
    let mut violations = Vec::new();
    let mut partial_sum = 0.0;
    let mut checkpoints = Vec::new();
    let mut next_mark = 10;
    for (k, &t) in ts.iter().enumerate().skip(2) {
        let m = t - 1.0;
        if !(1.0 <= m && m <= k as f64) {
            violations.push(k);
        }
        partial_sum += 1.0 / m;
        if k == next_mark {
            checkpoints.push((k, partial_sum));
            next_mark *= 10;
        }
    }
    if checkpoints.last().map(|c| c.0) != Some(ts.len() - 1) {
        checkpoints.push((ts.len() - 1, partial_sum));
    }
    Ok(RyuBoundsReport {
        violations,
        partial_sum,
        checkpoints,
    })
}
