//! Composite objectives `F = f + g`.

use std::fmt;

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Convex, differentiable part with a `beta`-Lipschitz gradient.
pub trait SmoothPart: Send + Sync + fmt::Debug {
    fn value(&self, x: &Vector) -> f64;
    fn gradient(&self, x: &Vector) -> Vector;
    /// Declared Lipschitz constant of the gradient. Never estimated.
    fn beta(&self) -> f64;
}

/// Convex, lower semicontinuous, proper part with a closed-form prox.
pub trait NonsmoothPart: Send + Sync + fmt::Debug {
    /// May return `f64::INFINITY` off the domain.
    fn value(&self, x: &Vector) -> f64;
    /// `argmin_u g(u) + |u - v|^2 / (2 step)`.
    fn prox(&self, v: &Vector, step: f64) -> Vector;
    /// True only for `g == 0`.
    fn is_zero(&self) -> bool {
        false
    }
}

/// A known minimizer set with a closed-form projection.
#[derive(Debug, Clone, PartialEq)]
pub enum SolutionSet {
    Point(Vector),
    /// Closed segment `[a, b]`.
    Segment(Vector, Vector),
}

impl SolutionSet {
    pub fn project(&self, x: &Vector) -> Vector {
        match self {
            SolutionSet::Point(p) => p.clone(),
            SolutionSet::Segment(a, b) => {
                let d = b - a;
                let len_sq = d.norm_sq();
                if len_sq == 0.0 {
                    return a.clone();
                }
                let s = ((x - a).dot(&d) / len_sq).clamp(0.0, 1.0);
                Vector::lincomb(1.0, a, s, &d)
            }
        }
    }

    pub fn dist_sq(&self, x: &Vector) -> f64 {
        self.project(x).dist_sq(x)
    }
}

/// Ground truth attached to a problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// One minimizer.
    pub s_ref: Vector,
    /// `min F`.
    pub mu: f64,
    /// Whole minimizer set, when the family has a closed form for it.
    pub set: Option<SolutionSet>,
}

impl Solution {
    /// `dist^2(x0, S)` and whether it is exact; falls back to `|x0 - s_ref|^2`.
    pub fn dist_sq_to_set(&self, x: &Vector) -> (f64, bool) {
        match &self.set {
            Some(set) => (set.dist_sq(x), true),
            None => (self.s_ref.dist_sq(x), false),
        }
    }
}

/// `minimize f(x) + g(x)` over R^dim.
#[derive(Debug)]
pub struct CompositeProblem {
    id: String,
    dim: usize,
    f: Box<dyn SmoothPart>,
    g: Box<dyn NonsmoothPart>,
    solution: Option<Solution>,
}

impl CompositeProblem {
    pub fn new(
        id: impl Into<String>,
        dim: usize,
        f: Box<dyn SmoothPart>,
        g: Box<dyn NonsmoothPart>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("problem dimension must be >= 1".into()));
        }
        let beta = f.beta();
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
        }
        Ok(Self {
            id: id.into(),
            dim,
            f,
            g,
            solution: None,
        })
    }

    pub fn with_solution(mut self, solution: Solution) -> Result<Self> {
        solution.s_ref.ensure_dim(self.dim)?;
        self.solution = Some(solution);
        Ok(self)
    }

    pub(crate) fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn beta(&self) -> f64 {
        self.f.beta()
    }

    pub fn smooth(&self) -> &dyn SmoothPart {
        self.f.as_ref()
    }

    pub fn nonsmooth(&self) -> &dyn NonsmoothPart {
        self.g.as_ref()
    }

    pub fn solution(&self) -> Option<&Solution> {
        self.solution.as_ref()
    }

    pub fn mu(&self) -> Option<f64> {
        self.solution.as_ref().map(|s| s.mu)
    }

    /// `F(x) = f(x) + g(x)`; `+inf` exactly when `g(x) = +inf`.
    pub fn eval(&self, x: &Vector) -> Result<f64> {
        x.ensure_dim(self.dim)?;
        let gx = self.g.value(x);
        if gx == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        Ok(self.f.value(x) + gx)
    }
}

/// Outcome of an empirical Lipschitz certification of `grad f`.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzReport {
    pub max_ratio: f64,
    pub beta: f64,
    pub pairs_used: usize,
    pub pass: bool,
}

/// Largest observed `|grad f(u) - grad f(v)| / |u - v|` against the declared beta.
pub fn check_lipschitz(
    problem: &CompositeProblem,
    samples: &[(Vector, Vector)],
) -> Result<LipschitzReport> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("need at least one sample pair".into()));
    }
    let f = problem.smooth();
    let mut max_ratio = 0f64;
    let mut pairs_used = 0;
    for (u, v) in samples {
        u.ensure_dim(problem.dim())?;
        v.ensure_dim(problem.dim())?;
        let d = u.dist(v);
        if d == 0.0 {
            continue;
        }
        let ratio = f.gradient(u).dist(&f.gradient(v)) / d;
        max_ratio = max_ratio.max(ratio);
        pairs_used += 1;
    }
    if pairs_used == 0 {
        return Err(Error::InvalidArgument("all sample pairs coincide".into()));
    }
    let beta = f.beta();
    Ok(LipschitzReport {
        max_ratio,
        beta,
        pairs_used,
        pass: max_ratio <= beta * (1.0 + 1e-8),
    })
}
