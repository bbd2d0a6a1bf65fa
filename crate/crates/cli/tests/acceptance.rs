//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so
//! the lines always reach the test log; exits non-zero if any criterion
//! fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use smoothcond::bounds::{
    analytic_lemma_checks, cg_cost_and_breakeven, cg_iteration_bound, edelman_limit, q_limit, LambdaMode,
};
use smoothcond::cg::{cg_experiment, cg_solve, CgOptions};
use smoothcond::experiments::{
    chen_dongarra_suite, estimate_q, make_ones_center, printed_table, reproduce_tables, run_suite, run_trials,
    theorem_tail_suite, verify_inequality_suite, CenterScale, QMethod, Suite, TableRatio, Verdict,
    BOUND_COLUMN_TOLERANCE, TABLE_TOLERANCE,
};
use smoothcond::sampling::{GaussianEnsemble, Seed};
use smoothcond::stats::mean_and_se;
use smoothcond::svd::{singular_values, svd};
use smoothcond::Matrix;

const MASTER: u64 = 20_240_601;

/// Rows at or below this size are compared against the printed tables.
const TABLE_MAX_M: usize = 80;
const TABLE_TRIALS: usize = 500;
const THEOREM_TRIALS: usize = 10_000;
const THEOREM_GRID_POINTS: usize = 8;
const Q_FOR_THEOREM_TRIALS: usize = 2_000;
const CHEN_DONGARRA_TRIALS: usize = 100_000;
const CHEN_DONGARRA_MULTIPLES: [f64; 3] = [1.0, 2.0, 5.0];
const Q_LIMIT_TRIALS: usize = 1_000;
const Q_LIMIT_REL_TOL: f64 = 0.05;
const Q_GRID_TRIALS: usize = 500;
const Q_GRID: [(usize, usize); 10] = [
    (2, 3),
    (5, 5),
    (5, 20),
    (10, 10),
    (10, 15),
    (20, 30),
    (20, 60),
    (40, 50),
    (50, 200),
    (100, 120),
];
const Q_CROSS_TRIALS: usize = 2_000;
const EDELMAN_TRIALS: usize = 500;
const EDELMAN_REL_TOL: f64 = 0.10;
const BATTERY_TRIALS: usize = 10_000;
const CG_INSTANCES: usize = 200;
const CG_EPS: f64 = 1e-8;
const CG_DIM: usize = 60;
const CG_COLS: usize = 90;
/// `κ(A)` of the controlled instances is log-uniform on `[1, CG_MAX_KAPPA_A]`.
const CG_MAX_KAPPA_A: f64 = 30.0;
const FINITE_TERMINATION_TOL: f64 = 1e-10;
const PLUG_IN_TOL: f64 = 1e-12;

type Check = fn() -> Criterion;

struct Criterion {
    passed: bool,
    detail: String,
}

fn verdict_summary(vs: &[Verdict]) -> (bool, String) {
    let failed: Vec<&Verdict> = vs.iter().filter(|v| !v.passed).collect();
    let mut s = format!("{}/{} checks", vs.len() - failed.len(), vs.len());
    if let Some(v) = failed.first() {
        s.push_str(&format!("; first failure {} (lhs {:.6e}, rhs {:.6e})", v.check, v.lhs, v.rhs));
    }
    (failed.is_empty(), s)
}

fn seed(tag: &str) -> Seed {
    Seed::new(MASTER, 0).derive(tag)
}

fn c1_tables() -> Criterion {
    let mut rows = 0;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for ratio in TableRatio::ALL {
        let t = reproduce_tables(ratio, TABLE_TRIALS, Seed::new(MASTER, 0), LambdaMode::Asymptotic, Some(TABLE_MAX_M))
            .expect("table run");
        for r in &t.rows {
            rows += 1;
            worst = worst.max(r.delta_avr.abs());
            if r.delta_avr.abs() > TABLE_TOLERANCE {
                failures.push(format!("n={ratio}m m={} delta {:+.4}", r.m, r.delta_avr));
            }
        }
    }
    let expected: usize = TableRatio::ALL
        .iter()
        .map(|&r| printed_table(r).iter().filter(|p| p.m <= TABLE_MAX_M).count())
        .sum();
    Criterion {
        passed: failures.is_empty() && rows == expected,
        detail: format!(
            "{rows} rows, worst |delta| {worst:.4} (tol {TABLE_TOLERANCE}){}",
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join(", ")) }
        ),
    }
}

fn c2_bound_column() -> Criterion {
    let mut worst = 0.0f64;
    for ratio in TableRatio::ALL {
        let t = reproduce_tables(ratio, 2, Seed::new(MASTER, 0), LambdaMode::Asymptotic, Some(10)).expect("table run");
        for r in &t.rows {
            worst = worst.max(r.delta_bound.abs());
        }
    }
    Criterion {
        passed: worst <= BOUND_COLUMN_TOLERANCE,
        detail: format!("worst |computed - printed| {worst:.2e} (tol {BOUND_COLUMN_TOLERANCE:e})"),
    }
}

fn c3_theorem() -> Criterion {
    let mut verdicts = Vec::new();
    for (m, n, sigma) in [(10, 15, 1.0), (10, 15, 0.5), (20, 60, 0.1)] {
        let q = estimate_q(m, n, Q_FOR_THEOREM_TRIALS, seed(&format!("c3/q/{m}/{n}")), QMethod::Dense)
            .expect("q estimate")
            .estimate;
        for (tag, center) in [
            ("zero", Matrix::zeros(m, n)),
            ("ones-unit", make_ones_center(m, n, CenterScale::UnitNorm)),
        ] {
            let e = GaussianEnsemble::new(center, sigma).expect("ensemble");
            let r = theorem_tail_suite(
                &e,
                q,
                THEOREM_GRID_POINTS,
                THEOREM_TRIALS,
                seed(&format!("c3/{m}/{n}/{sigma}/{tag}")),
            )
            .expect("theorem suite");
            verdicts.extend(r.verdicts);
        }
    }
    let (passed, detail) = verdict_summary(&verdicts);
    Criterion { passed, detail }
}

fn c4_chen_dongarra() -> Criterion {
    let r = chen_dongarra_suite(10, 12, &CHEN_DONGARRA_MULTIPLES, CHEN_DONGARRA_TRIALS, seed("c4")).expect("suite");
    let (passed, detail) = verdict_summary(&r.verdicts);
    Criterion { passed, detail }
}

fn c5_q() -> Criterion {
    let limit = q_limit(50.0 / 200.0).expect("q limit");
    let q = estimate_q(50, 200, Q_LIMIT_TRIALS, seed("c5/limit"), QMethod::Dense).expect("q");
    let rel = (q.estimate - limit).abs() / limit;
    let limit_ok = rel <= Q_LIMIT_REL_TOL;

    let mut outside = Vec::new();
    for (m, n) in Q_GRID {
        let e = estimate_q(m, n, Q_GRID_TRIALS, seed(&format!("c5/grid/{m}/{n}")), QMethod::Dense).expect("q");
        if e.within_analytic_bounds != Some(true) {
            outside.push(format!("({m},{n})={:.4}", e.estimate));
        }
    }

    let a = estimate_q(20, 30, Q_CROSS_TRIALS, seed("c5/dense"), QMethod::Dense).expect("q");
    let b = estimate_q(20, 30, Q_CROSS_TRIALS, seed("c5/bidiagonal"), QMethod::Bidiagonal).expect("q");
    let combined = (a.standard_error.powi(2) + b.standard_error.powi(2)).sqrt();
    let agree = (a.estimate - b.estimate).abs() <= 3.0 * combined;

    Criterion {
        passed: limit_ok && outside.is_empty() && agree,
        detail: format!(
            "Q(50,200)={:.4} vs {limit} (rel {rel:.3}); grid outside: {}; dense {:.4} vs bidiagonal {:.4} (3se {:.4})",
            q.estimate,
            if outside.is_empty() { "none".to_string() } else { outside.join(" ") },
            a.estimate,
            b.estimate,
            3.0 * combined
        ),
    }
}

fn c6_edelman() -> Criterion {
    let limit = edelman_limit(100.0 / 400.0).expect("limit");
    let records = run_trials(&GaussianEnsemble::standard(100, 400), EDELMAN_TRIALS, seed("c6")).expect("trials");
    let kappas: Vec<f64> = records.iter().map(|r| r.kappa).collect();
    let est = mean_and_se(&kappas);
    let rel = (est.mean - limit).abs() / limit;
    Criterion {
        passed: rel <= EDELMAN_REL_TOL,
        detail: format!(
            "mean kappa {:.4} ± {:.4} vs {limit} (rel {rel:.4}, tol {EDELMAN_REL_TOL})",
            est.mean, est.standard_error
        ),
    }
}

fn c7_identities() -> Criterion {
    let mut verdicts = run_suite(Suite::ExactIdentities, seed("c7"), BATTERY_TRIALS).expect("suite").verdicts;
    let center = make_ones_center(20, 60, CenterScale::UnitNorm);
    let e = GaussianEnsemble::new(center, 1.0 / 20f64.sqrt()).expect("ensemble");
    let x = cg_experiment(&e, 1e-6, 50, seed("c7/cg"), LambdaMode::Asymptotic).expect("cg experiment");
    verdicts.extend(x.verdicts.into_iter().filter(|v| v.check.contains("identity")));
    let (passed, detail) = verdict_summary(&verdicts);
    Criterion { passed, detail }
}

fn c8_battery() -> Criterion {
    let lemmas = analytic_lemma_checks();
    let lemma_fail: Vec<&str> = lemmas.iter().filter(|l| !l.passed).map(|l| l.name.as_str()).collect();
    let r = verify_inequality_suite(seed("c8"), BATTERY_TRIALS).expect("suite");
    let (suite_ok, detail) = verdict_summary(&r.verdicts);
    Criterion {
        passed: lemma_fail.is_empty() && suite_ok,
        detail: format!(
            "lemmas {}/{}; empirical {detail}",
            lemmas.len() - lemma_fail.len(),
            lemmas.len()
        ),
    }
}

/// `A = U diag(s) Vᵀ[:m]` with Haar-like `U`, `V` from SVDs of Gaussian
/// matrices, `s` spanning `[1, κ_A]`.
fn controlled_instance(i: u64) -> (Matrix, f64, Vec<f64>) {
    let mut st = seed("c9/instances").with_stream(i).stream();
    let (m, n) = (CG_DIM, CG_COLS);
    let kappa_a = CG_MAX_KAPPA_A.powf(st.uniform());
    let mut s: Vec<f64> = (0..m).map(|_| 1.0 + (kappa_a - 1.0) * st.uniform()).collect();
    s[0] = kappa_a;
    s[m - 1] = 1.0;
    let u = svd(&st.standard_gaussian(m, m)).expect("svd").left_vectors;
    let v = svd(&st.standard_gaussian(n, n)).expect("svd").right_vectors;
    let a = Matrix::from_fn(m, n, |r, c| (0..m).map(|k| u[(r, k)] * s[k] * v[(c, k)]).sum());
    let x_true = st.normals(m);
    (a, kappa_a, x_true)
}

fn c9_cg() -> Criterion {
    let mut worst_ratio = 0.0f64;
    let mut violations = 0;
    let mut unconverged = 0;
    for i in 0..CG_INSTANCES as u64 {
        let (a, _, x_true) = controlled_instance(i);
        let p = a.gram();
        let sp = singular_values(&p).expect("svd");
        let kappa_p = sp[0] / sp[sp.len() - 1];
        let c = p.matvec(&x_true);
        let sol = cg_solve(&p, &c, CG_EPS, &CgOptions::default()).expect("cg");
        let bound = cg_iteration_bound(kappa_p, CG_EPS).expect("bound") + 1.0;
        if !sol.stats.converged {
            unconverged += 1;
        }
        if sol.stats.iterations as f64 > bound {
            violations += 1;
        }
        worst_ratio = worst_ratio.max(sol.stats.iterations as f64 / bound);
    }

    let mut finite_fail = Vec::new();
    for k in [1usize, 2, 3, 5] {
        let dim = 12;
        let p = Matrix::from_fn(dim, dim, |r, c| if r == c { 1.0 + (r % k) as f64 } else { 0.0 });
        let c: Vec<f64> = (0..dim).map(|i| 1.0 + 0.1 * i as f64).collect();
        let sol = cg_solve(&p, &c, FINITE_TERMINATION_TOL, &CgOptions::default()).expect("cg");
        if !sol.stats.converged || sol.stats.iterations > k {
            finite_fail.push(format!("k={k}: {} iterations", sol.stats.iterations));
        }
    }

    let plug = [
        (
            cg_cost_and_breakeven(910, 0.0, 0.5, 0.0).expect("plug-in").breakeven_eps,
            (-10.0f64).exp(),
        ),
        (cg_cost_and_breakeven(10, 0.0, (-1.0f64).exp(), 0.0).expect("plug-in").cost, 6030.0),
        (
            cg_cost_and_breakeven(100, 0.5, (-1.0f64).exp(), 0.0).expect("plug-in").cost,
            60.3 * 100.0 * 100.0 / 0.5,
        ),
    ];
    let plug_ok = plug.iter().all(|(got, want)| ((got - want) / want).abs() <= PLUG_IN_TOL);

    Criterion {
        passed: violations == 0 && unconverged == 0 && finite_fail.is_empty() && plug_ok,
        detail: format!(
            "{violations}/{CG_INSTANCES} over 1/2 sqrt(kappa)|ln eps|+1 (worst iterations/bound {worst_ratio:.3}), \
             {unconverged} unconverged; finite termination {}; plug-ins {}",
            if finite_fail.is_empty() { "ok".to_string() } else { finite_fail.join(", ") },
            if plug_ok { "exact" } else { "MISMATCH" }
        ),
    }
}

fn smoothcond(args: &[&str], out: &Path) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_smoothcond"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SMOOTHCOND_SEED")
        .stdout(std::process::Stdio::null())
        .status()
        .expect("spawn smoothcond");
    status.code().unwrap_or(-1)
}

fn c10_determinism() -> Criterion {
    let dir = tempfile::tempdir().expect("tempdir");
    let runs: [&[&str]; 5] = [
        &["verify", "--trials", "1000", "--seed", "7"],
        &["tail", "--m", "10", "--n", "15", "--sigma", "0.5", "--center", "ones-unit", "--trials", "2000", "--z-grid", "5"],
        &["tables", "--ratio", "2", "--trials", "100", "--max-m", "20"],
        &["cg-bench", "--m", "20", "--n", "60", "--sigma", "0.2236", "--center", "ones-unit", "--trials", "20"],
        &["expect", "--m", "10", "--n", "20", "--trials", "300", "--seed", "3"],
    ];
    let mut mismatches = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let a = dir.path().join(format!("{i}-a.json"));
        let b = dir.path().join(format!("{i}-b.json"));
        let c = dir.path().join(format!("{i}-c.json"));
        let mut first = vec!["--threads", "1"];
        first.extend_from_slice(args);
        let mut second = vec!["--threads", "4"];
        second.extend_from_slice(args);
        let codes = [
            smoothcond(&first, &a),
            smoothcond(&second, &b),
            smoothcond(&["--threads", "3", "replay", a.to_str().unwrap()], &c),
        ];
        let read = |p: &Path| std::fs::read(p).unwrap_or_default();
        let (ra, rb, rc) = (read(&a), read(&b), read(&c));
        if ra.is_empty() || ra != rb || ra != rc || codes.iter().any(|&k| k != codes[0]) {
            mismatches.push(format!("{} (exit codes {codes:?})", args[0]));
        }
    }
    Criterion {
        passed: mismatches.is_empty(),
        detail: format!(
            "{} commands at 1/4 threads plus replay at 3 threads; mismatches: {}",
            runs.len(),
            if mismatches.is_empty() { "none".to_string() } else { mismatches.join(", ") }
        ),
    }
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("table reproduction", c1_tables),
        ("bound column", c2_bound_column),
        ("smoothed tail theorem", c3_theorem),
        ("average-case sandwich", c4_chen_dongarra),
        ("Q limit and bounds", c5_q),
        ("Edelman limit", c6_edelman),
        ("exact identities", c7_identities),
        ("lemma battery", c8_battery),
        ("conjugate gradients", c9_cg),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let c = f();
        if !c.passed {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} [{:.1}s]",
            if c.passed { "PASS" } else { "FAIL" },
            i + 1,
            c.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
