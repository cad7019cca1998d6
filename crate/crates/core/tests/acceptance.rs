//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::f64::consts::SQRT_2;
use std::process::ExitCode;
use std::time::Instant;

use superop_norms::norm_opt::{brute_force_oracle, norm_q_to_p, NormQuery, OptimizerConfig};
use superop_norms::suite::{build_example, verify_with, VerificationReport};
use superop_norms::SchattenExponent;

const SEED: u64 = 42;
const TRIALS: usize = 50;
const EXACT_TRIALS: usize = 200;
const ORACLE_INSTANCES: usize = 20;
const ORACLE_RESOLUTION: usize = 400;

const OPTIMIZER_TOL: f64 = 2e-3;
const EXACT_TOL: f64 = 1e-9;
const MONOTONE_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 5e-3;
const SQRT2_ORACLE_TOL: f64 = 1e-3;

struct Outcome {
    passed: bool,
    summary: String,
}

fn suite(id: &str, trials: usize, tol: f64) -> (bool, String) {
    match verify_with(id, SEED, trials, &OptimizerConfig::with_seed(SEED)) {
        Ok(r) => judge(&r, tol),
        Err(e) => (false, format!("{id}: error {e}")),
    }
}

fn judge(r: &VerificationReport, tol: f64) -> (bool, String) {
    let ok = r.passed && r.worst_residual <= tol;
    (ok, format!("{} trials={} worst={:.3e} tol={:.0e}", r.claim_id, r.trials, r.worst_residual, tol))
}

fn criterion(parts: Vec<(bool, String)>) -> Outcome {
    let passed = parts.iter().all(|(ok, _)| *ok);
    let summary = parts.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join("; ");
    Outcome { passed, summary }
}

/// Grid oracle and optimizer on the Hermitian dim-4 difference, both against sqrt 2.
fn sqrt2_cross_check() -> (bool, String) {
    let phi = build_example("dim4_pair").expect("example").combined();
    let one = SchattenExponent::ONE;
    let query = NormQuery::new(one, one).hermitian(true);
    let oracle = match brute_force_oracle(&phi, &query, ORACLE_RESOLUTION) {
        Ok(v) => v,
        Err(e) => return (false, format!("sqrt2 oracle: error {e}")),
    };
    let opt = match norm_q_to_p(&phi, &query, &OptimizerConfig::with_seed(SEED)) {
        Ok(est) => est.value,
        Err(e) => return (false, format!("sqrt2 optimizer: error {e}")),
    };
    let ok = (oracle - SQRT_2).abs() <= SQRT2_ORACLE_TOL && (opt - SQRT_2).abs() <= OPTIMIZER_TOL;
    (ok, format!("sqrt2 oracle={oracle:.6} optimizer={opt:.6}"))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("transpose instability", Box::new(|| criterion(vec![suite("transpose_instability", 1, OPTIMIZER_TOL)]))),
        ("CP maps: plain equals hermitian", Box::new(|| criterion(vec![suite("theorem1", TRIALS, OPTIMIZER_TOL)]))),
        ("left/right CP bound", Box::new(|| criterion(vec![suite("lemma1", TRIALS, OPTIMIZER_TOL)]))),
        (
            "hermitian counterexamples",
            Box::new(|| criterion(vec![sqrt2_cross_check(), suite("prop_counterexamples", 1, OPTIMIZER_TOL)])),
        ),
        ("ancilla stability for p>=2, q<=2", Box::new(|| criterion(vec![suite("theorem2", TRIALS, OPTIMIZER_TOL)]))),
        ("ancilla saturation at dim_in", Box::new(|| criterion(vec![suite("theorem3", TRIALS, OPTIMIZER_TOL)]))),
        ("CP hermitian stability", Box::new(|| criterion(vec![suite("ahw_fact", TRIALS, OPTIMIZER_TOL)]))),
        (
            "exact linear algebra",
            Box::new(|| {
                criterion(vec![
                    suite("monotone_p", EXACT_TRIALS, MONOTONE_TOL),
                    suite("hoelder", EXACT_TRIALS, EXACT_TOL),
                    suite("duality", EXACT_TRIALS, EXACT_TOL),
                    suite("block_bounds", EXACT_TRIALS, EXACT_TOL),
                    suite("svd_reconstruction", EXACT_TRIALS, EXACT_TOL),
                    suite("cp_positivity", EXACT_TRIALS, EXACT_TOL),
                ])
            }),
        ),
        ("oracle concordance", Box::new(|| criterion(vec![suite("oracle_concordance", ORACLE_INSTANCES, ORACLE_TOL)]))),
    ];

    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        if !outcome.passed {
            failures += 1;
        }
        println!("{verdict} {} {name} ({:.1}s): {}", i + 1, start.elapsed().as_secs_f64(), outcome.summary);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
