//! The scalar-sequence lemma: `g_k = h_{k+1} + phi_k (h_{k+1} - h_k)`.
//! If `g` converges and `sum 1/phi_k` diverges, `h` has the same limit; the
//! converse fails, and the divergence hypothesis cannot be dropped.

use fista_lab::bcch::{bcch_weights, BcchScenario, SCENARIO_NAMES};
use fista_lab::experiment::bcch_demo;

fn main() -> fista_lab::Result<()> {
    let (w, ln_prod) = bcch_weights(|k| k as f64, 1, 5)?;
    println!("weights w_(6,k) for phi_k = k: {w:.4?}");
    println!("sum w = {:.6} = 1 - prod lambda = {:.6}", w.iter().sum::<f64>(), 1.0 - ln_prod.exp());

    for name in SCENARIO_NAMES {
        let k = if name == "ex43" { 100_000 } else { 10_000 };
        let demo = bcch_demo(name, k)?;
        let sc = BcchScenario::by_name(name)?;
        println!("\n{name} (K = {k}): h_K = {:.8}; {}", demo.report.h_last, sc.expected_limit.provenance);
        for c in &demo.checks {
            println!("  {}", c.line());
        }
    }
    Ok(())
}
