//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fista_lab::bcch::{
    bcch_reconstruct, bcch_weighted_form, weights_from_lambdas, BcchScenario,
};
use fista_lab::diagnostics::{
    check_momentum_identity, inner_product_seq, salzo_check, verdict, vector_verdict,
    xi_difference_check, SpanProjector, Which,
};
use fista_lab::families::{feasibility_plane, random_quadratic};
use fista_lab::problem::check_lipschitz;
use fista_lab::schedule::{ryu_bounds_check, validate_schedule, Schedule};
use fista_lab::solver::{audit, fista_run, pgm_run, RunOptions, Trace};
use fista_lab::{CheckReport, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIG1_ITERS: usize = 100_000;

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    checks: Vec<CheckReport>,
    budget: Option<Duration>,
}

impl Outcome {
    fn new(checks: Vec<CheckReport>) -> Self {
        Self { checks, budget: None }
    }
    fn within(mut self, secs: u64) -> Self {
        self.budget = Some(Duration::from_secs(secs));
        self
    }
}

fn s_refs() -> Vec<Vector> {
    vec![
        Vector::from([0.0, 1.0]),
        Vector::from([1.0, 0.0]),
        Vector::from([0.5, 0.5]),
    ]
}

fn fig1_run(iterations: usize) -> Trace {
    fista_run(
        &feasibility_plane(),
        &Vector::from([5.0, 0.0]),
        &mut Schedule::beck_teboulle(),
        iterations,
        &s_refs(),
        RunOptions::default(),
    )
    .expect("fista run")
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize, r: f64) -> Vector {
    Vector::from((0..dim).map(|_| rng.gen_range(-r..r)).collect::<Vec<_>>())
}

fn rename(mut c: CheckReport, claim: impl Into<String>) -> CheckReport {
    c.claim = claim.into();
    c
}

fn rate_bound() -> Outcome {
    let mut checks = Vec::new();
    let plane = feasibility_plane();
    let trace = fista_run(
        &plane,
        &Vector::from([5.0, 0.0]),
        &mut Schedule::beck_teboulle(),
        1000,
        &[],
        RunOptions::default(),
    )
    .unwrap();
    checks.push(rename(audit::rate_bound(&trace, &plane).unwrap(), "rate_bound[plane]"));

    let dim = 8;
    for seed in 1..=5u64 {
        let q = random_quadratic(dim, seed, 0.05, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let pairs: Vec<(Vector, Vector)> = (0..200)
            .map(|_| (random_vector(&mut rng, dim, 5.0), random_vector(&mut rng, dim, 5.0)))
            .collect();
        let lip = check_lipschitz(&q, &pairs).unwrap();
        checks.push(CheckReport::bound(
            format!("beta_certified[q{seed}]"),
            lip.max_ratio,
            lip.beta * (1.0 + 1e-8),
        ));
        let x0 = random_vector(&mut rng, dim, 5.0);
        let trace = fista_run(&q, &x0, &mut Schedule::beck_teboulle(), 1000, &[], RunOptions::default())
            .unwrap();
        checks.push(rename(audit::rate_bound(&trace, &q).unwrap(), format!("rate_bound[q{seed}]")));
    }
    Outcome::new(checks).within(5)
}

fn lyapunov_chain() -> Outcome {
    let trace = fig1_run(10_000);
    Outcome::new(audit::lyapunov(&trace)).within(5)
}

fn figure_one(trace: &Trace) -> Outcome {
    let mut checks = vec![audit::final_distance(trace, &Vector::from([0.4829, 0.5171]), 1e-3)];
    let x1 = trace.records[1].x().unwrap();
    let x2 = trace.records[2].x().unwrap();
    checks.push(CheckReport::bound("x1 = (3, -2)", x1.dist(&Vector::from([3.0, -2.0])), 1e-12));
    checks.push(CheckReport::bound("x2 = (2, -1)", x2.dist(&Vector::from([2.0, -1.0])), 1e-12));
    let pgm = pgm_run(&feasibility_plane(), &Vector::from([5.0, 0.0]), 40, &[], RunOptions::default())
        .unwrap();
    checks.push(rename(
        audit::final_distance(&pgm, &Vector::from([1.0, 0.0]), 1e-6),
        "pgm_final_point",
    ));
    Outcome::new(checks).within(10)
}

fn structural(trace: &Trace) -> Outcome {
    let mut checks = audit::structural(trace);
    let dirs = [
        Vector::from([1.0, -1.0]),
        Vector::from([1.0, 0.0]),
        Vector::from([0.3, 0.7]),
    ];
    for d in &dirs {
        let c = check_momentum_identity(trace, d).unwrap();
        checks.push(rename(c, format!("momentum_identity[{:?}]", d.as_slice())));
    }
    Outcome::new(checks)
}

fn sufficient_decrease(trace: &Trace) -> Outcome {
    let plane = feasibility_plane();
    let center = Vector::from([0.5, 0.5]);
    let probes = audit::domain_probes(&plane, &center, 6.0, 100, 7).unwrap();
    let n = trace.len() - 1;
    // first 50 rows plus 50 spread over the run
    let mut rows: Vec<usize> = (0..50).collect();
    rows.extend((1..=50).map(|i| i * n / 50));
    Outcome::new(vec![audit::sufficient_decrease(&plane, trace, &probes, &rows).unwrap()])
}

fn schedules() -> Outcome {
    let last = 100_000;
    let mut checks = Vec::new();
    for (name, mut s) in [("bt", Schedule::beck_teboulle()), ("linear", Schedule::linear())] {
        let ts = s.prefix(last).unwrap();
        let v = validate_schedule(ts).unwrap();
        let mut c = CheckReport::bound(
            format!("valid[{name}]"),
            (v.growth_violations.len() + v.coupling_violations.len()) as f64,
            0.0,
        );
        c.note = Some(format!("t_0..t_{last}"));
        checks.push(c);
        if name == "bt" {
            checks.push(CheckReport::bound("bt_coupling_equality", v.max_abs_coupling_residual, 1e-9));
        }
        let r = ryu_bounds_check(ts).unwrap();
        checks.push(CheckReport::bound(format!("1 <= t_k - 1 <= k [{name}]"), r.violations.len() as f64, 0.0));
        checks.push(CheckReport::exceeds(format!("partial_sum[{name}]"), r.partial_sum, 10.0));
    }
    Outcome::new(checks)
}

fn bcch_suite() -> Outcome {
    let mut checks = Vec::new();

    // (a)
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0f64;
    for n in 1..=200 {
        let lambdas: Vec<f64> = (0..n).map(|_| rng.gen_range(0.001..0.999)).collect();
        let (w, ln_prod) = weights_from_lambdas(&lambdas);
        let direct: f64 = lambdas.iter().product();
        worst = worst.max((w.iter().sum::<f64>() - (1.0 - direct)).abs());
        worst = worst.max((ln_prod.exp() - direct).abs());
    }
    checks.push(CheckReport::bound("(a) weights_telescoping", worst, 1e-12));

    // (b)
    let mut worst = 0f64;
    for name in ["ex42", "ex43", "ex44-sinh"] {
        let sc = BcchScenario::by_name(name).unwrap();
        let g = sc.g_seq(1000);
        let phi = |k| sc.phi(k);
        let rec = bcch_reconstruct(&g, phi, sc.h_start());
        let wf = bcch_weighted_form(&g, phi, sc.h_start());
        for (a, b) in rec.values.iter().zip(&wf.values) {
            worst = worst.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    checks.push(CheckReport::bound("(b) weighted_form_vs_recursion", worst, 1e-10));

    // (c)
    let sinh = BcchScenario::by_name("ex44-sinh").unwrap();
    let h = sinh.h_seq(10_000);
    let exact = PI / PI.sinh();
    checks.push(CheckReport::bound("(c) h_1e4 vs pi/sinh(pi)", (h.at(10_000).unwrap() - exact).abs(), 2e-4));

    // (d)
    let ex42 = BcchScenario::by_name("ex42").unwrap();
    let limit = ex42.expected_limit.value;
    let g = ex42.g_seq(1000);
    let g_res = g
        .indexed()
        .map(|(k, v)| {
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            (v - limit - 2.0 * sign).abs()
        })
        .fold(0.0, f64::max);
    checks.push(CheckReport::bound("(d) g_k = l + 2(-1)^(k+1)", g_res, 1e-12));
    let hv = verdict(&ex42.h_seq(1000), 100, 1e-2).unwrap();
    checks.push(hv.report("(d) h_verdict"));
    checks.push(CheckReport::bound("(d) h_limit", (hv.limit_estimate - limit).abs(), 1e-2));

    // (e)
    let plus = BcchScenario::by_name("linf-plus").unwrap();
    checks.push(CheckReport::exceeds("(e) linf_plus h_1e4", plus.h_seq(10_000).at(10_000).unwrap(), 1e3));
    Outcome::new(checks)
}

fn weak_convergence(trace: &Trace) -> Outcome {
    let refs = s_refs();
    let mut checks = Vec::new();
    for i in 0..refs.len() {
        for j in i + 1..refs.len() {
            let rep = salzo_check(trace, &[(refs[i].clone(), refs[j].clone())], 100, 1e-3).unwrap();
            checks.push(rep.verdicts[0].report(format!("salzo[s{i},s{j}]")));
            let xv = xi_difference_check(trace, i, j, 100, 1e-6).unwrap();
            checks.push(xv.report(format!("xi_difference[s{i},s{j}]")));
        }
    }
    let last = trace.last();
    checks.push(CheckReport::bound(format!("|y_K - x_K| at K = {}", last.k), last.gap_xy, 1e-4));
    Outcome::new(checks)
}

fn span_projection(trace: &Trace) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut idem, mut adj) = (0f64, 0f64);
    for trial in 0..200 {
        let dim = rng.gen_range(2..8);
        let m = rng.gen_range(1..dim + 2);
        let mut c: Vec<Vector> = (0..m).map(|_| random_vector(&mut rng, dim, 3.0)).collect();
        if trial % 2 == 0 && m >= 2 {
            // force rank deficiency
            let combo = &(&c[0] * 2.0) - &(&c[1] * 0.5);
            c.push(combo);
            c.push(c[0].clone());
        }
        let p = SpanProjector::new(&c).unwrap();
        let x = random_vector(&mut rng, dim, 3.0);
        let y = random_vector(&mut rng, dim, 3.0);
        let px = p.project(&x);
        idem = idem.max(p.project(&px).dist(&px));
        adj = adj.max((px.dot(&y) - x.dot(&p.project(&y))).abs());
    }
    let mut checks = vec![
        CheckReport::bound("projector_idempotent", idem, 1e-10),
        CheckReport::bound("projector_self_adjoint", adj, 1e-10),
    ];
    let p = SpanProjector::new(&[Vector::from([1.0, -1.0])]).unwrap();
    let projected: Vec<Vector> = trace.states().unwrap().iter().map(|s| p.project(&s.x)).collect();
    let v = vector_verdict(&projected, 100, 1e-3).unwrap();
    checks.push(CheckReport {
        claim: "P_Y x_k verdict".into(),
        pass: v.converged,
        residual_or_oscillation: v.tail_oscillation,
        window: Some(v.window),
        tol: v.tol,
        note: None,
    });
    let seq = inner_product_seq(trace, Which::X, &Vector::from([1.0, -1.0])).unwrap();
    checks.push(verdict(&seq, 100, 1e-3).unwrap().report("<x_k, (1,-1)> verdict"));
    Outcome::new(checks)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let fig1 = fig1_run(FIG1_ITERS);
    let fig1_time = start.elapsed();

    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("1 rate bound", Box::new(rate_bound)),
        ("2 lyapunov chain", Box::new(lyapunov_chain)),
        ("3 figure-1 limits", Box::new(|| figure_one(&fig1))),
        ("4 structural identities", Box::new(|| structural(&fig1))),
        ("5 sufficient decrease", Box::new(|| sufficient_decrease(&fig1))),
        ("6 schedule certification", Box::new(schedules)),
        ("7 bcch suite", Box::new(bcch_suite)),
        ("8 weak-convergence proxy", Box::new(|| weak_convergence(&fig1))),
        ("9 span projection", Box::new(|| span_projection(&fig1))),
    ];

    let mut all = true;
    let mut details = Vec::new();
    for (name, run) in &criteria {
        let t = Instant::now();
        let mut outcome = run();
        let mut elapsed = t.elapsed();
        if name.starts_with('3') {
            elapsed += fig1_time;
        }
        if let Some(budget) = outcome.budget {
            let mut c = CheckReport::bound("runtime_s", elapsed.as_secs_f64(), budget.as_secs_f64());
            c.note = Some("seconds".into());
            outcome.checks.push(c);
        }
        let pass = outcome.checks.iter().all(|c| c.pass);
        all &= pass;
        println!(
            "{} criterion {name} ({} checks, {:.2}s)",
            if pass { "PASS" } else { "FAIL" },
            outcome.checks.len(),
            elapsed.as_secs_f64()
        );
        details.push((name.to_string(), outcome.checks));
    }
    for (name, checks) in details {
        println!("-- {name}");
        for c in checks {
            println!("   {}", c.line());
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
