//! Concrete smooth and nonsmooth parts, and the problem families built from them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::orthonormal_basis;
use crate::error::{Error, Result};
use crate::problem::{CompositeProblem, NonsmoothPart, SmoothPart, Solution, SolutionSet};
use crate::prox::{
    half_sq_dist_grad, project_orthant, soft_threshold, AffineHyperplane, ConvexSet,
    NonnegativeOrthant,
};
use crate::vector::Vector;

/// `f = 1/2 dist^2(., R_+^n)`, 1-smooth.
#[derive(Debug, Clone)]
pub struct HalfSqDistOrthant {
    orthant: NonnegativeOrthant,
}

impl HalfSqDistOrthant {
    pub fn new(dim: usize) -> Result<Self> {
        Ok(Self {
            orthant: NonnegativeOrthant::new(dim)?,
        })
    }
}

impl SmoothPart for HalfSqDistOrthant {
    fn value(&self, x: &Vector) -> f64 {
        0.5 * x.dist_sq(&project_orthant(x))
    }

    fn gradient(&self, x: &Vector) -> Vector {
        half_sq_dist_grad(&self.orthant, x)
    }

    fn beta(&self) -> f64 {
        1.0
    }
}

/// `f(x) = 1/2 (x - c)^T A (x - c)` with `A` symmetric positive semidefinite.
#[derive(Debug, Clone)]
pub struct Quadratic {
    dim: usize,
    /// Row-major `dim x dim`.
    matrix: Vec<f64>,
    center: Vector,
    beta: f64,
}

impl Quadratic {
    /// `beta` is the declared largest eigenvalue of `matrix`.
    pub fn new(matrix: Vec<f64>, center: Vector, beta: f64) -> Result<Self> {
        let dim = center.dim();
        if matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: matrix.len(),
            });
        }
        Ok(Self {
            dim,
            matrix,
            center,
            beta,
        })
    }

    pub fn diagonal(diag: &[f64], center: Vector) -> Result<Self> {
        let dim = diag.len();
        if diag.iter().any(|&d| d < 0.0) {
            return Err(Error::InvalidArgument("diagonal entries must be >= 0".into()));
        }
        let mut matrix = vec![0.0; dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            matrix[i * dim + i] = d;
        }
        let beta = diag.iter().cloned().fold(0.0, f64::max);
        Self::new(matrix, center, beta)
    }

    /// `A = sum_i eigenvalues[i] q_i q_i^T` for an orthonormal basis `q`.
    pub fn from_eigen(basis: &[Vector], eigenvalues: &[f64], center: Vector) -> Result<Self> {
        let dim = center.dim();
        if basis.len() != dim || eigenvalues.len() != dim {
            return Err(Error::InvalidArgument("need one eigenvalue per basis vector".into()));
        }
        let mut matrix = vec![0.0; dim * dim];
        for (q, &d) in basis.iter().zip(eigenvalues) {
            for r in 0..dim {
                for c in 0..dim {
                    matrix[r * dim + c] += d * q[r] * q[c];
                }
            }
        }
        let beta = eigenvalues.iter().cloned().fold(0.0, f64::max);
        Self::new(matrix, center, beta)
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    fn apply(&self, v: &Vector) -> Vector {
        let n = self.dim;
        (0..n)
            .map(|r| (0..n).map(|c| self.matrix[r * n + c] * v[c]).sum())
            .collect::<Vec<f64>>()
            .into()
    }
}

impl SmoothPart for Quadratic {
    fn value(&self, x: &Vector) -> f64 {
        let d = x - &self.center;
        0.5 * d.dot(&self.apply(&d))
    }

    fn gradient(&self, x: &Vector) -> Vector {
        self.apply(&(x - &self.center))
    }

    fn beta(&self) -> f64 {
        self.beta
    }
}

/// `g == 0`; its prox is the identity.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zero;

impl NonsmoothPart for Zero {
    fn value(&self, _x: &Vector) -> f64 {
        0.0
    }

    fn prox(&self, v: &Vector, _step: f64) -> Vector {
        v.clone()
    }

    fn is_zero(&self) -> bool {
        true
    }
}

/// Indicator `iota_C` of a closed convex set.
#[derive(Debug, Clone)]
pub struct Indicator(pub ConvexSet);

impl NonsmoothPart for Indicator {
    fn value(&self, x: &Vector) -> f64 {
        if self.0.contains(x) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox(&self, v: &Vector, _step: f64) -> Vector {
        self.0.project(v)
    }
}

/// `g(x) = weight * |x|_1`.
#[derive(Debug, Clone, Copy)]
pub struct L1Norm {
    pub weight: f64,
}

impl NonsmoothPart for L1Norm {
    fn value(&self, x: &Vector) -> f64 {
        self.weight * x.iter().map(|c| c.abs()).sum::<f64>()
    }

    fn prox(&self, v: &Vector, step: f64) -> Vector {
        soft_threshold(v, self.weight * step)
    }
}

/// Find a point of `R_+^n` on the hyperplane `<normal, x> = offset`:
/// `f = 1/2 dist^2(., R_+^n)`, `g = iota_V`.
///
/// With a positive normal and offset the sets intersect, so `mu = 0`; in the
/// plane the minimizer set is the segment joining the two axis intercepts.
pub fn feasibility(normal: Vector, offset: f64) -> Result<CompositeProblem> {
    let dim = normal.dim();
    let plane = AffineHyperplane::new(normal.clone(), offset)?;
    let problem = CompositeProblem::new(
        "feasibility",
        dim,
        Box::new(HalfSqDistOrthant::new(dim)?),
        Box::new(Indicator(ConvexSet::Hyperplane(plane))),
    )?;
    if !(offset > 0.0 && normal.iter().all(|&n| n > 0.0)) {
        return Ok(problem);
    }
    let s_ref = normal.scale(offset / normal.norm_sq());
    let set = (dim == 2).then(|| {
        SolutionSet::Segment(
            Vector::from([0.0, offset / normal[1]]),
            Vector::from([offset / normal[0], 0.0]),
        )
    });
    problem.with_solution(Solution {
        s_ref,
        mu: 0.0,
        set,
    })
}

/// The planar instance: orthant `R_+^2` and the line `x + y = 1`.
pub fn feasibility_plane() -> CompositeProblem {
    feasibility(Vector::from([1.0, 1.0]), 1.0).expect("fixed data is valid")
}

/// Smooth quadratic with `g == 0`; the unique minimizer is `center` when every
/// eigenvalue is positive.
pub fn quadratic(q: Quadratic) -> Result<CompositeProblem> {
    let center = q.center().clone();
    let dim = center.dim();
    CompositeProblem::new("quadratic", dim, Box::new(q), Box::new(Zero))?.with_solution(
        Solution {
            s_ref: center.clone(),
            mu: 0.0,
            set: Some(SolutionSet::Point(center)),
        },
    )
}

/// Strongly convex quadratic with a random orthonormal eigenbasis.
///
/// Eigenvalues lie in `[min_eig, max_eig]` with both endpoints attained, so
/// the declared `beta = max_eig` is exact.
pub fn random_quadratic(dim: usize, seed: u64, min_eig: f64, max_eig: f64) -> Result<CompositeProblem> {
    if dim == 0 || !(0.0 < min_eig && min_eig <= max_eig) {
        return Err(Error::InvalidArgument(
            "need dim >= 1 and 0 < min_eig <= max_eig".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = loop {
        let raw: Vec<Vector> = (0..dim)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>().into())
            .collect();
        let q = orthonormal_basis(&raw)?;
        if q.len() == dim {
            break q;
        }
    };
    let mut eig: Vec<f64> = (0..dim).map(|_| rng.gen_range(min_eig..=max_eig)).collect();
    eig[0] = max_eig;
    if dim > 1 {
        eig[1] = min_eig;
    }
    let center: Vector = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<_>>().into();
    let mut p = quadratic(Quadratic::from_eigen(&basis, &eig, center)?)?;
    p.set_id(format!("random_quadratic(dim={dim},seed={seed})"));
    Ok(p)
}

/// `1/2 sum_i d_i (x_i - c_i)^2 + weight |x|_1`; separable, minimizer
/// `x_i = soft(c_i, weight / d_i)`.
pub fn l1_separable(diag: &[f64], center: Vector, weight: f64) -> Result<CompositeProblem> {
    if diag.iter().any(|&d| d <= 0.0) || weight < 0.0 {
        return Err(Error::InvalidArgument("need d_i > 0 and weight >= 0".into()));
    }
    let dim = center.dim();
    let s: Vector = diag
        .iter()
        .zip(center.iter())
        .map(|(&d, &c)| c.signum() * (c.abs() - weight / d).max(0.0))
        .collect::<Vec<_>>()
        .into();
    let f = Quadratic::diagonal(diag, center)?;
    let g = L1Norm { weight };
    let mu = f.value(&s) + g.value(&s);
    CompositeProblem::new("l1_separable", dim, Box::new(f), Box::new(g))?.with_solution(Solution {
        s_ref: s.clone(),
        mu,
        set: Some(SolutionSet::Point(s)),
    })
}
