//! FISTA and the proximal gradient method for `min f + g`, instrumented so
//! that every inequality and identity in FISTA's iterate-convergence argument
//! can be checked on finite runs.
//!
//! - [`problem`], [`families`], [`prox`]: objectives and closed-form operators
//! - [`schedule`]: momentum sequences `t_k` and their certification
//! - [`solver`]: `T`, PGM, FISTA, traces and trace audits
//! - [`diagnostics`]: tail-window convergence verdicts, span projections
//! - [`bcch`]: the scalar-sequence lemma and its limiting examples
//! - [`experiment`]: JSON-configured runs and the reproduction entry points

pub mod bcch;
pub mod diagnostics;
mod error;
pub mod experiment;
pub mod families;
pub mod problem;
pub mod prox;
mod report;
pub mod schedule;
pub mod solver;
mod vector;

pub use error::{Error, Result};
pub use report::CheckReport;
pub use vector::Vector;
