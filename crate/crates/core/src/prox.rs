//! Closed-form projections and proximal maps.
//!
//! Indicator functions are evaluated with a small relative membership
//! tolerance: a projected point lands on a hyperplane only up to roundoff,
//! and an exact membership test would report `+inf` for it.

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Relative tolerance for set membership in indicator evaluation.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// The hyperplane `{x : <normal, x> = offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineHyperplane {
    normal: Vector,
    offset: f64,
    normal_sq: f64,
}

impl AffineHyperplane {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        normal.ensure_finite()?;
        let normal_sq = normal.norm_sq();
        if normal_sq == 0.0 || normal.dim() == 0 {
            return Err(Error::InvalidArgument(
                "hyperplane normal must be nonzero".into(),
            ));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidArgument("hyperplane offset must be finite".into()));
        }
        Ok(Self {
            normal,
            offset,
            normal_sq,
        })
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// Signed violation `<normal, x> - offset`.
    pub fn violation(&self, x: &Vector) -> f64 {
        self.normal.dot(x) - self.offset
    }

    pub fn contains(&self, x: &Vector) -> bool {
        let scale = 1f64
            .max(self.offset.abs())
            .max(self.normal.norm() * x.norm());
        self.violation(x).abs() <= MEMBERSHIP_TOL * scale
    }
}

/// `R_+^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonnegativeOrthant {
    dim: usize,
}

impl NonnegativeOrthant {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("orthant dimension must be >= 1".into()));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, x: &Vector) -> bool {
        let scale = x.iter().fold(1f64, |m, c| m.max(c.abs()));
        x.iter().all(|&c| c >= -MEMBERSHIP_TOL * scale)
    }

    /// `dist(x, R_+^n)`.
    pub fn dist(&self, x: &Vector) -> f64 {
        x.iter().map(|&c| c.min(0.0).powi(2)).sum::<f64>().sqrt()
    }
}

/// Closed convex sets with a closed-form projection.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    Orthant(NonnegativeOrthant),
    Hyperplane(AffineHyperplane),
}

impl ConvexSet {
    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Orthant(o) => o.dim(),
            ConvexSet::Hyperplane(h) => h.dim(),
        }
    }

    pub fn project(&self, x: &Vector) -> Vector {
        match self {
            ConvexSet::Orthant(_) => project_orthant(x),
            ConvexSet::Hyperplane(h) => project_hyperplane(h, x),
        }
    }

    pub fn contains(&self, x: &Vector) -> bool {
        match self {
            ConvexSet::Orthant(o) => o.contains(x),
            ConvexSet::Hyperplane(h) => h.contains(x),
        }
    }
}

/// Coordinatewise `max(x_i, 0)`.
pub fn project_orthant(x: &Vector) -> Vector {
    x.map(|c| c.max(0.0))
}

/// `x - ((<n, x> - offset) / |n|^2) n`.
pub fn project_hyperplane(h: &AffineHyperplane, x: &Vector) -> Vector {
    let coeff = h.violation(x) / h.normal_sq;
    Vector::lincomb(1.0, x, -coeff, &h.normal)
}

/// Prox of an indicator is the projection; `step` only has to be positive.
pub fn prox_indicator(set: &ConvexSet, v: &Vector, step: f64) -> Result<Vector> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("prox step must be > 0, got {step}")));
    }
    Ok(set.project(v))
}

/// Prox of `lambda_step * |.|_1`: shrink each coordinate toward zero.
pub fn soft_threshold(v: &Vector, lambda_step: f64) -> Vector {
    debug_assert!(lambda_step >= 0.0);
    v.map(|c| c.signum() * (c.abs() - lambda_step).max(0.0))
}

/// Gradient of `1/2 dist^2(., R_+^n)`, i.e. `x - P(x)`.
pub fn half_sq_dist_grad(_set: &NonnegativeOrthant, x: &Vector) -> Vector {
    x - &project_orthant(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> AffineHyperplane {
        AffineHyperplane::new(Vector::from([1.0, 1.0]), 1.0).unwrap()
    }

    /// Brute-force nearest point over a grid, the oracle for the projections.
    fn grid_argmin(x: &Vector, candidates: impl Iterator<Item = Vector>) -> Vector {
        candidates
            .min_by(|a, b| a.dist_sq(x).partial_cmp(&b.dist_sq(x)).unwrap())
            .unwrap()
    }

    #[test]
    fn orthant_projection_examples() {
        assert_eq!(project_orthant(&Vector::from([5.0, 0.0])), Vector::from([5.0, 0.0]));
        assert_eq!(project_orthant(&Vector::from([-1.0, -1.0])), Vector::from([0.0, 0.0]));

        let x = Vector::from([3.0, -2.0]);
        let grid = (0..=100).flat_map(|i| {
            (0..=100).map(move |j| Vector::from([i as f64 * 0.05, j as f64 * 0.05]))
        });
        let oracle = grid_argmin(&x, grid);
        assert_eq!(oracle, Vector::from([3.0, 0.0]));
        assert_eq!(project_orthant(&x), oracle);
    }

    #[test]
    fn hyperplane_projection_examples() {
        let h = line();
        assert_eq!(project_hyperplane(&h, &Vector::from([0.5, 0.5])), Vector::from([0.5, 0.5]));

        // grid over the line x + y = 1, parametrized by the first coordinate
        let on_line = |a: f64| Vector::from([a, 1.0 - a]);
        for (x, want) in [([5.0, 0.0], [3.0, -2.0]), ([3.0, 0.0], [2.0, -1.0])] {
            let x = Vector::from(x);
            let oracle = grid_argmin(&x, (0..=10_000).map(|i| on_line(-5.0 + i as f64 * 1e-3)));
            let p = project_hyperplane(&h, &x);
            assert!(p.dist(&oracle) < 1e-3);
            assert!(p.dist(&Vector::from(want)) < 1e-15);
            assert!(h.violation(&p).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_normal_rejected() {
        assert!(AffineHyperplane::new(Vector::zeros(2), 1.0).is_err());
        assert!(NonnegativeOrthant::new(0).is_err());
    }

    #[test]
    fn indicator_prox_ignores_step() {
        let orthant = ConvexSet::Orthant(NonnegativeOrthant::new(2).unwrap());
        for step in [1e-3, 1.0, 1e3] {
            assert_eq!(
                prox_indicator(&orthant, &Vector::from([-1.0, 2.0]), step).unwrap(),
                Vector::from([0.0, 2.0])
            );
        }
        let h = ConvexSet::Hyperplane(line());
        let a = prox_indicator(&h, &Vector::from([5.0, 0.0]), 1.0).unwrap();
        let b = prox_indicator(&h, &Vector::from([5.0, 0.0]), 0.01).unwrap();
        assert_eq!(a, b);
        assert!(a.dist(&Vector::from([3.0, -2.0])) < 1e-15);
        assert!(prox_indicator(&h, &a, 0.0).is_err());
    }

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(soft_threshold(&Vector::from([3.0, -0.5]), 1.0), Vector::from([2.0, 0.0]));
        let v = Vector::from([1.5, -2.0, 0.0]);
        assert_eq!(soft_threshold(&v, 0.0), v);
        assert_eq!(soft_threshold(&Vector::from([-2.0]), 2.0), Vector::from([0.0]));
    }

    #[test]
    fn half_sq_dist_grad_examples() {
        let u = NonnegativeOrthant::new(2).unwrap();
        assert_eq!(half_sq_dist_grad(&u, &Vector::from([5.0, 0.0])), Vector::from([0.0, 0.0]));
        assert_eq!(half_sq_dist_grad(&u, &Vector::from([3.0, -2.0])), Vector::from([0.0, -2.0]));
        assert_eq!(half_sq_dist_grad(&u, &Vector::from([-1.0, -1.0])), Vector::from([-1.0, -1.0]));
    }
}
