//! Momentum schedules: the Beck-Teboulle recursion, the linear rule
//! `t_k = (k + 2) / 2`, and a constant schedule that fails the growth condition.

use fista_lab::experiment::validate;

fn main() -> fista_lab::Result<()> {
    for name in ["bt", "linear", "constant-ones"] {
        let v = validate(name, 100_000)?;
        let c = &v.conditions;
        println!(
            "{name:>13}: valid={} growth violations={} coupling violations={} max |coupling residual|={:.2e}",
            v.valid,
            c.growth_violations.len(),
            c.coupling_violations.len(),
            c.max_abs_coupling_residual,
        );
        println!(
            "{:>13}  sum_(k=2..1e5) 1/(t_k - 1) = {:.4}, bound violations = {}",
            "",
            v.bounds.partial_sum,
            v.bounds.violations.len()
        );
    }
    Ok(())
}
