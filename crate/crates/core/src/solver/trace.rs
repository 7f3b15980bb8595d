//! Solver traces and their CSV / JSON export.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pgm,
    Fista,
    Nesterov,
}

/// The three iterates at one step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterateState {
    pub x: Vector,
    pub y: Vector,
    pub z: Vector,
}

/// One row of a trace.
///
/// Residual columns are relative to the magnitude of the terms involved,
/// except `res_suffdec`, which is the raw slack of the sufficient-decrease
/// inequality with probe `x_{k-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateRecord {
    pub k: usize,
    pub t: f64,
    /// `F(x_k)`, possibly `+inf`.
    pub fx: f64,
    /// `F(x_k) - mu`; absent when `mu` is unknown.
    pub delta: Option<f64>,
    /// `t_{k-1}^2 delta_k + beta/2 |z_k - s|^2` per reference solution; absent at `k = 0`.
    pub xi: Vec<Option<f64>>,
    /// `z_k` (from `(1 - t_k) x_k + t_k y_k`) against `(1 - t_{k-1}) x_{k-1} + t_{k-1} x_k`.
    pub res_zdef: f64,
    /// `x_k` against `(1 - 1/t_{k-1}) x_{k-1} + (1/t_{k-1}) z_k`.
    pub res_convex: f64,
    /// `y_k` against `(1 - 1/t_k) x_k + (1/t_k) z_k`.
    pub res_ydef: f64,
    pub res_suffdec: Option<f64>,
    pub gap_xy: f64,
    pub norm_x: f64,
    pub norm_z: f64,
    /// Vectors, kept every `snapshot_every` rows and at the last row.
    pub state: Option<IterateState>,
}

impl IterateRecord {
    pub fn x(&self) -> Option<&Vector> {
        self.state.as_ref().map(|s| &s.x)
    }

    pub fn y(&self) -> Option<&Vector> {
        self.state.as_ref().map(|s| &s.y)
    }

    pub fn z(&self) -> Option<&Vector> {
        self.state.as_ref().map(|s| &s.z)
    }
}

/// Contiguous rows `k = 0..=K` of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub method: Method,
    pub problem_id: String,
    pub schedule_id: String,
    pub beta: f64,
    pub mu: Option<f64>,
    pub x0: Vector,
    pub s_refs: Vec<Vector>,
    pub snapshot_every: usize,
    pub records: Vec<IterateRecord>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> &IterateRecord {
        self.records.last().expect("trace has at least the initial row")
    }

    /// Final iterate; always snapshotted.
    pub fn final_x(&self) -> &Vector {
        self.last().x().expect("last row keeps its vectors")
    }

    pub fn state(&self, k: usize) -> Result<&IterateState> {
        self.records
            .get(k)
            .and_then(|r| r.state.as_ref())
            .ok_or(Error::MissingSnapshots { k })
    }

    /// All rows' states; fails unless every row was snapshotted.
    pub fn states(&self) -> Result<Vec<&IterateState>> {
        (0..self.len()).map(|k| self.state(k)).collect()
    }

    pub fn csv_header(&self) -> String {
        let mut h = String::from("k,t,Fx,delta");
        for i in 0..self.s_refs.len() {
            let _ = write!(h, ",xi_s{i}");
        }
        h.push_str(",res_zdef,res_convex,res_suffdec,gap_xy,norm_x,norm_z");
        h
    }

    /// CSV with 17 significant digits; absent values are empty fields.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", self.csv_header())?;
        let mut line = String::new();
        for r in &self.records {
            line.clear();
            let _ = write!(line, "{},{},{},{}", r.k, fmt17(r.t), fmt17(r.fx), fmt_opt(r.delta));
            for xi in &r.xi {
                let _ = write!(line, ",{}", fmt_opt(*xi));
            }
            let _ = write!(
                line,
                ",{},{},{},{},{},{}",
                fmt17(r.res_zdef),
                fmt17(r.res_convex),
                fmt_opt(r.res_suffdec),
                fmt17(r.gap_xy),
                fmt17(r.norm_x),
                fmt17(r.norm_z)
            );
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Sidecar JSON with the retained vector snapshots.
    pub fn snapshots_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Snap<'a> {
            k: usize,
            t: f64,
            #[serde(flatten)]
            state: &'a IterateState,
        }
        let snaps: Vec<Snap<'_>> = self
            .records
            .iter()
            .filter_map(|r| r.state.as_ref().map(|state| Snap { k: r.k, t: r.t, state }))
            .collect();
        serde_json::json!({
            "method": self.method,
            "problem": self.problem_id,
            "schedule": self.schedule_id,
            "snapshot_every": self.snapshot_every,
            "x0": self.x0,
            "s_refs": self.s_refs,
            "snapshots": snaps,
        })
    }
}

/// 17 significant digits, round-trippable.
pub fn fmt17(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt17_round_trips() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0] {
            let s = fmt17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt17(f64::INFINITY), "inf");
        assert_eq!(fmt_opt(None), "");
    }
}
