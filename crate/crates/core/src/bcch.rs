//! The scalar-sequence lemma behind FISTA's iterate convergence.
//!
//! For positive weights `phi_k` with `sum 1/phi_k = inf`, the transform
//!
//! ```text
//! g_k = h_{k+1} + phi_k (h_{k+1} - h_k)
//! ```
//!
//! preserves limits backwards: `g_k -> l` forces `h_k -> l`. Inverting it gives
//! `h_{k+1} = (1 - lambda_k) g_k + lambda_k h_k` with `lambda_k = phi_k / (1 + phi_k)`,
//! and unrolling that recursion writes `h_n` as a weighted average of the `g_k`.
//!
//! Products of many `lambda_j` are accumulated as sums of logarithms.

use serde::Serialize;

use crate::diagnostics::{verdict, ConvergenceVerdict, ScalarSeq};
use crate::error::{Error, Result};

/// Index function `k -> phi_k`.
pub type IndexFn = Box<dyn Fn(usize) -> f64 + Send + Sync>;

/// `lambda = phi / (1 + phi)`.
pub fn lambda(phi: f64) -> f64 {
    phi / (1.0 + phi)
}

/// `1 - lambda = 1 / (1 + phi)`, without cancellation.
pub fn one_minus_lambda(phi: f64) -> f64 {
    1.0 / (1.0 + phi)
}

/// `ln lambda = -ln(1 + 1/phi)`.
pub fn ln_lambda(phi: f64) -> f64 {
    -(1.0 / phi).ln_1p()
}

/// `g_k` for `k = h.start .. h.end() - 1`.
pub fn bcch_forward(h: &ScalarSeq, phi: impl Fn(usize) -> f64) -> ScalarSeq {
    let values = h
        .values
        .windows(2)
        .enumerate()
        .map(|(i, w)| w[1] + phi(h.start + i) * (w[1] - w[0]))
        .collect();
    ScalarSeq::new(format!("forward({})", h.label), h.start, values)
}

/// Lazily yields `h_start = h0, h_{start+1}, ...` from a stream of `g_k`.
pub struct Reconstruct<I, P> {
    g: I,
    phi: P,
    k: usize,
    h: Option<f64>,
}

impl<I: Iterator<Item = f64>, P: Fn(usize) -> f64> Iterator for Reconstruct<I, P> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let h = self.h?;
        self.h = self.g.next().map(|g| {
            let phi = (self.phi)(self.k);
            one_minus_lambda(phi) * g + lambda(phi) * h
        });
        self.k += 1;
        Some(h)
    }
}

pub fn reconstruct_iter<I, P>(g: I, phi: P, start: usize, h0: f64) -> Reconstruct<I::IntoIter, P>
where
    I: IntoIterator<Item = f64>,
    P: Fn(usize) -> f64,
{
    Reconstruct {
        g: g.into_iter(),
        phi,
        k: start,
        h: Some(h0),
    }
}

/// `h` from `g` by the recursion; one entry longer than `g`.
pub fn bcch_reconstruct(g: &ScalarSeq, phi: impl Fn(usize) -> f64, h0: f64) -> ScalarSeq {
    let values = reconstruct_iter(g.values.iter().copied(), phi, g.start, h0).collect();
    ScalarSeq::new(format!("reconstruct({})", g.label), g.start, values)
}

/// `w_{n,k} = (1 - lambda_k) prod_{j=k+1}^{n-1} lambda_j` for `k = 0..n`,
/// from `(lambda_k, 1 - lambda_k, ln lambda_k)` triples.
fn weights_from(terms: &[(f64, f64)]) -> (Vec<f64>, f64) {
    let n = terms.len();
    let mut w = vec![0.0; n];
    let mut log_prod = 0f64;
    for k in (0..n).rev() {
        let (one_minus, ln_l) = terms[k];
        w[k] = one_minus * log_prod.exp();
        log_prod += ln_l;
    }
    (w, log_prod)
}

/// Weights `w_{n,0..n-1}` with positions counted from `start`, and
/// `ln prod_{j<n} lambda_j`.
pub fn bcch_weights(phi: impl Fn(usize) -> f64, start: usize, n: usize) -> Result<(Vec<f64>, f64)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let terms: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let p = phi(start + i);
            (one_minus_lambda(p), ln_lambda(p))
        })
        .collect();
    Ok(weights_from(&terms))
}

/// Weights directly from `lambda_k in (0, 1)`.
pub fn weights_from_lambdas(lambdas: &[f64]) -> (Vec<f64>, f64) {
    let terms: Vec<(f64, f64)> = lambdas.iter().map(|&l| (1.0 - l, l.ln())).collect();
    weights_from(&terms)
}

/// `h_n = sum_{k<n} w_{n,k} g_k + h0 prod_{j<n} lambda_j` for `n = 0..=len(g)`.
///
/// Quadratic in `len(g)`; independent of [`bcch_reconstruct`] apart from the
/// shared `lambda`.
pub fn bcch_weighted_form(g: &ScalarSeq, phi: impl Fn(usize) -> f64, h0: f64) -> ScalarSeq {
    let terms: Vec<(f64, f64)> = (0..g.len())
        .map(|i| {
            let p = phi(g.start + i);
            (one_minus_lambda(p), ln_lambda(p))
        })
        .collect();
    let mut values = Vec::with_capacity(g.len() + 1);
    values.push(h0);
    for n in 1..=g.len() {
        let (w, log_prod) = weights_from(&terms[..n]);
        let avg: f64 = w.iter().zip(&g.values).map(|(w, g)| w * g).sum();
        values.push(avg + h0 * log_prod.exp());
    }
    ScalarSeq::new(format!("weighted({})", g.label), g.start, values)
}

/// Partial-sum evidence for the divergent-series hypothesis over `k = start..=last`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceWitness {
    pub terms: usize,
    pub sum_inv_phi: f64,
    pub sum_min_one_inv_phi: f64,
    pub sum_inv_one_plus_phi: f64,
    pub sum_one_minus_lambda: f64,
    /// `ln prod lambda_k`; at most `-sum_one_minus_lambda`.
    pub ln_prod_lambda: f64,
    /// Indices where `1/(1+phi) >= min(1, 1/phi) / 2` fails.
    pub chain_violations: Vec<usize>,
}

pub fn divergence_witness(phi: impl Fn(usize) -> f64, start: usize, last: usize) -> Result<DivergenceWitness> {
    if last < start.max(1) {
        return Err(Error::InvalidArgument("need last >= max(start, 1)".into()));
    }
    let mut w = DivergenceWitness {
        terms: 0,
        sum_inv_phi: 0.0,
        sum_min_one_inv_phi: 0.0,
        sum_inv_one_plus_phi: 0.0,
        sum_one_minus_lambda: 0.0,
        ln_prod_lambda: 0.0,
        chain_violations: Vec::new(),
    };
    for k in start..=last {
        let p = phi(k);
        if !(p > 0.0) {
            return Err(Error::InvalidArgument(format!("phi_{k} = {p} is not positive")));
        }
        let inv = 1.0 / p;
        let inv_one_plus = 1.0 / (1.0 + p);
        let min = inv.min(1.0);
        w.terms += 1;
        w.sum_inv_phi += inv;
        w.sum_min_one_inv_phi += min;
        w.sum_inv_one_plus_phi += inv_one_plus;
        w.sum_one_minus_lambda += one_minus_lambda(p);
        w.ln_prod_lambda += ln_lambda(p);
        if !(inv_one_plus >= 0.5 * min) {
            w.chain_violations.push(k);
        }
    }
    Ok(w)
}

/// Source of the `h` sequence in a scenario.
pub enum HSource {
    /// `h_k` in closed form.
    Explicit(IndexFn),
    /// `g_k` in closed form; `h` by recursion from `h_start`.
    FromG { g: IndexFn, h_start: f64 },
}

/// Limit value with where it comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectedLimit {
    /// May be `+-inf`.
    pub value: f64,
    pub provenance: &'static str,
}

/// A pair `(phi, h or g)` with the limit `h` is expected to reach.
pub struct BcchScenario {
    pub name: String,
    pub start: usize,
    pub phi: IndexFn,
    pub h_source: HSource,
    pub expected_limit: ExpectedLimit,
    /// Closed form of `g_k` for checking the forward transform, when known.
    pub g_closed_form: Option<IndexFn>,
}

pub const SCENARIO_NAMES: [&str; 5] = ["ex42", "ex43", "ex44-sinh", "linf-plus", "linf-minus"];

impl BcchScenario {
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "ex42" => Self::bounded_oscillation(1.0),
            "ex43" => Self::unbounded_oscillation(1.0),
            "ex44-sinh" => Self::sinh_product(),
            "linf-plus" => Self::diverging_plus(),
            "linf-minus" => Self::diverging_plus().negated(),
            other => {
                return Err(Error::Config(format!(
                    "unknown scenario {other:?}; expected one of {SCENARIO_NAMES:?}"
                )))
            }
        })
    }

    /// `phi_k = k`, `h_k = l + (-1)^k / k`: `h -> l` while `g_k = l + 2 (-1)^{k+1}`.
    pub fn bounded_oscillation(limit: f64) -> Self {
        Self {
            name: "ex42".into(),
            start: 1,
            phi: Box::new(|k| k as f64),
            h_source: HSource::Explicit(Box::new(move |k| limit + sign(k) / k as f64)),
            expected_limit: ExpectedLimit {
                value: limit,
                provenance: "h converges although g oscillates with amplitude 2",
            },
            g_closed_form: Some(Box::new(move |k| limit - 2.0 * sign(k))),
        }
    }

    /// `phi_k = k`, `h_k = l + (-1)^k / sqrt(k)`: `g` is unbounded.
    pub fn unbounded_oscillation(limit: f64) -> Self {
        Self {
            name: "ex43".into(),
            start: 1,
            phi: Box::new(|k| k as f64),
            h_source: HSource::Explicit(Box::new(move |k| limit + sign(k) / (k as f64).sqrt())),
            expected_limit: ExpectedLimit {
                value: limit,
                provenance: "h converges although g is unbounded",
            },
            g_closed_form: Some(Box::new(move |k| {
                let k = k as f64;
                limit - sign(k as usize) * ((k + 1.0).sqrt() + k.sqrt())
            })),
        }
    }

    /// `phi_k = k^2` (summable `1/phi`), `g == 0`, `h_1 = 1`:
    /// `h_k = prod_{j<k} j^2/(1+j^2) -> pi / sinh(pi) != 0`.
    pub fn sinh_product() -> Self {
        Self {
            name: "ex44-sinh".into(),
            start: 1,
            phi: Box::new(|k| (k as f64) * (k as f64)),
            h_source: HSource::FromG {
                g: Box::new(|_| 0.0),
                h_start: 1.0,
            },
            expected_limit: ExpectedLimit {
                value: std::f64::consts::PI / std::f64::consts::PI.sinh(),
                provenance: "Euler product for sinh; g -> 0 but h does not",
            },
            g_closed_form: Some(Box::new(|_| 0.0)),
        }
    }

    /// `phi_k = k`, `g_k = k -> +inf`, `h_1 = 0`.
    pub fn diverging_plus() -> Self {
        Self {
            name: "linf-plus".into(),
            start: 1,
            phi: Box::new(|k| k as f64),
            h_source: HSource::FromG {
                g: Box::new(|k| k as f64),
                h_start: 0.0,
            },
            expected_limit: ExpectedLimit {
                value: f64::INFINITY,
                provenance: "g -> +inf forces h past every hurdle",
            },
            g_closed_form: Some(Box::new(|k| k as f64)),
        }
    }

    /// `(phi, -h)`: the transform is linear in `h`, so the limit flips sign.
    pub fn negated(self) -> Self {
        let name = match self.name.as_str() {
            "linf-plus" => "linf-minus".to_string(),
            other => format!("neg-{other}"),
        };
        let h_source = match self.h_source {
            HSource::Explicit(h) => HSource::Explicit(Box::new(move |k| -h(k))),
            HSource::FromG { g, h_start } => HSource::FromG {
                g: Box::new(move |k| -g(k)),
                h_start: -h_start,
            },
        };
        Self {
            name,
            start: self.start,
            phi: self.phi,
            h_source,
            expected_limit: ExpectedLimit {
                value: -self.expected_limit.value,
                provenance: "negation of the +inf scenario",
            },
            g_closed_form: self.g_closed_form.map(|g| Box::new(move |k| -g(k)) as IndexFn),
        }
    }

    pub fn phi(&self, k: usize) -> f64 {
        (self.phi)(k)
    }

    /// `h_start ..= h_last`.
    pub fn h_seq(&self, last: usize) -> ScalarSeq {
        match &self.h_source {
            HSource::Explicit(h) => {
                ScalarSeq::new("h", self.start, (self.start..=last).map(h.as_ref()).collect())
            }
            HSource::FromG { g, h_start } => {
                let gs = (self.start..last).map(g.as_ref());
                let values = reconstruct_iter(gs, self.phi.as_ref(), self.start, *h_start).collect();
                ScalarSeq::new("h", self.start, values)
            }
        }
    }

    /// `g_start ..= g_{last-1}`, computed by the forward transform of `h`
    /// (or taken from the closed form for recursion-defined scenarios).
    pub fn g_seq(&self, last: usize) -> ScalarSeq {
        match &self.h_source {
            HSource::Explicit(_) => {
                let mut g = bcch_forward(&self.h_seq(last), self.phi.as_ref());
                g.label = "g".into();
                g
            }
            HSource::FromG { g, .. } => {
                ScalarSeq::new("g", self.start, (self.start..last).map(g.as_ref()).collect())
            }
        }
    }

    pub fn h_start(&self) -> f64 {
        match &self.h_source {
            HSource::Explicit(h) => h(self.start),
            HSource::FromG { h_start, .. } => *h_start,
        }
    }
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Everything the scenario demo prints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub last: usize,
    pub expected_limit: ExpectedLimit,
    pub g_verdict: ConvergenceVerdict,
    pub h_verdict: ConvergenceVerdict,
    pub h_last: f64,
    pub divergence: DivergenceWitness,
    /// `|g_k - closed form|` over the run.
    pub g_closed_form_residual: Option<f64>,
}

/// Runs a scenario to index `last` and renders verdicts on both sequences.
pub fn analyze(sc: &BcchScenario, last: usize, window: usize, tol: f64) -> Result<ScenarioReport> {
    let h = sc.h_seq(last);
    let g = sc.g_seq(last);
    let g_closed_form_residual = sc.g_closed_form.as_ref().map(|gc| {
        g.indexed()
            .map(|(k, v)| (v - gc(k)).abs())
            .fold(0.0, f64::max)
    });
    Ok(ScenarioReport {
        scenario: sc.name.clone(),
        last,
        expected_limit: sc.expected_limit,
        g_verdict: verdict(&g, window, tol)?,
        h_verdict: verdict(&h, window, tol)?,
        h_last: *h.values.last().expect("nonempty"),
        divergence: divergence_witness(sc.phi.as_ref(), sc.start, last)?,
        g_closed_form_residual,
    })
}
