//! Named numerical checks, each run over seeded random instances or fixed
//! examples and summarized as a [`VerificationReport`].

mod examples;
mod random;

use std::f64::consts::SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::matrix::{eigh, schmidt, svd, vec_norm, ComplexMatrix, C64};
use crate::norm_opt::{
    brute_force_oracle, cp_norm, lemma1_bound, norm_q_to_p, NormQuery, OptimizerConfig,
};
use crate::schatten::{
    block_norm_bounds, duality_witness, hoelder_gap, schatten_norm, SchattenExponent,
};
use crate::superop::SuperOp;

pub use examples::{
    build_example, depolarizing_pair, dim4_pair, qinf_nonhermitian, simple_nonhermitian, transpose, Example,
    EXAMPLE_NAMES,
};
pub use random::{derive_seed, random_cp_channel, random_superop};

/// Slack allowed for optimizer-computed quantities.
pub const OPTIMIZER_TOLERANCE: f64 = 2e-3;
/// Slack for closed-form identities.
pub const EXACT_TOLERANCE: f64 = 1e-9;
/// Slack for Schatten monotonicity in `p`.
pub const MONOTONE_TOLERANCE: f64 = 1e-10;
/// Slack between the optimizer and the grid oracle.
pub const ORACLE_TOLERANCE: f64 = 5e-3;
/// Grid resolution used by `oracle_concordance`.
pub const ORACLE_RESOLUTION: usize = 400;

/// Every id accepted by [`verify`].
pub const CLAIM_IDS: &[&str] = &[
    "theorem1",
    "lemma1",
    "prop_counterexamples",
    "theorem2",
    "theorem3",
    "transpose_instability",
    "ahw_fact",
    "duality",
    "hoelder",
    "block_bounds",
    "monotone_p",
    "svd_reconstruction",
    "cp_positivity",
    "oracle_concordance",
];

/// One checked instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialDetail {
    pub label: String,
    pub residual: f64,
    /// The compared quantities, in the order named by the label.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim_id: String,
    pub trials: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    /// `worst_residual <= tolerance`.
    pub passed: bool,
    pub seed: u64,
    pub details: Vec<TrialDetail>,
}

/// Grid of exponents used by the optimizer suites.
pub fn exponent_grid() -> [SchattenExponent; 5] {
    [
        SchattenExponent::ONE,
        SchattenExponent::finite(1.5),
        SchattenExponent::TWO,
        SchattenExponent::finite(3.0),
        SchattenExponent::INFINITY,
    ]
}

/// Runs `claim_id` over `trials` instances with the default optimizer
/// budget, seeded by `seed`.
pub fn verify(claim_id: &str, seed: u64, trials: usize) -> Result<VerificationReport> {
    verify_with(claim_id, seed, trials, &OptimizerConfig::with_seed(seed))
}

/// [`verify`] with an explicit optimizer configuration. Claims built on
/// fixed examples ignore `trials`.
pub fn verify_with(claim_id: &str, seed: u64, trials: usize, cfg: &OptimizerConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut log = Log::default();
    let (tolerance, trials) = match claim_id {
        "theorem1" => (OPTIMIZER_TOLERANCE, theorem1(&mut log, seed, trials, cfg)?),
        "lemma1" => (OPTIMIZER_TOLERANCE, lemma1(&mut log, seed, trials, cfg)?),
        "prop_counterexamples" => (OPTIMIZER_TOLERANCE, prop_counterexamples(&mut log, cfg)?),
        "theorem2" => (OPTIMIZER_TOLERANCE, theorem2(&mut log, seed, trials, cfg)?),
        "theorem3" => (OPTIMIZER_TOLERANCE, theorem3(&mut log, seed, trials, cfg)?),
        "transpose_instability" => (OPTIMIZER_TOLERANCE, transpose_instability(&mut log, cfg)?),
        "ahw_fact" => (OPTIMIZER_TOLERANCE, ahw_fact(&mut log, seed, trials, cfg)?),
        "duality" => (EXACT_TOLERANCE, duality(&mut log, seed, trials)?),
        "hoelder" => (EXACT_TOLERANCE, hoelder(&mut log, seed, trials)?),
        "block_bounds" => (EXACT_TOLERANCE, block_bounds(&mut log, seed, trials)?),
        "monotone_p" => (MONOTONE_TOLERANCE, monotone_p(&mut log, seed, trials)),
        "svd_reconstruction" => (EXACT_TOLERANCE, svd_reconstruction(&mut log, seed, trials)?),
        "cp_positivity" => (EXACT_TOLERANCE, cp_positivity(&mut log, seed, trials)?),
        "oracle_concordance" => (ORACLE_TOLERANCE, oracle_concordance(&mut log, seed, trials, cfg)?),
        _ => return invalid(format!("unknown claim {claim_id:?}; expected one of {}", CLAIM_IDS.join(", "))),
    };
    let worst = log.details.iter().map(|d| d.residual).fold(0.0, f64::max);
    Ok(VerificationReport {
        claim_id: claim_id.to_string(),
        trials,
        worst_residual: worst,
        tolerance,
        passed: worst <= tolerance,
        seed,
        details: log.details,
    })
}

#[derive(Default)]
struct Log {
    details: Vec<TrialDetail>,
}

impl Log {
    fn record(&mut self, label: String, residual: f64, values: Vec<f64>) {
        // NaN must count as a failure.
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        self.details.push(TrialDetail { label, residual, values });
    }

    fn equal(&mut self, label: String, got: f64, want: f64) {
        self.record(label, (got - want).abs(), vec![got, want]);
    }
}

/// Per-trial generator and shape choices.
fn trial_rng(seed: u64, trial: usize) -> (ChaCha8Rng, u64) {
    let s = derive_seed(seed, trial as u64);
    (ChaCha8Rng::seed_from_u64(s ^ 0x5EED), s)
}

fn small_dim(rng: &mut ChaCha8Rng) -> usize {
    rng.gen_range(2..=3)
}

fn theorem1(log: &mut Log, seed: u64, trials: usize, cfg: &OptimizerConfig) -> Result<usize> {
    for t in 0..trials {
        let (mut rng, s) = trial_rng(seed, t);
        let (n, m, k) = (small_dim(&mut rng), small_dim(&mut rng), rng.gen_range(1..=3));
        let phi = random_cp_channel(n, m, k, s)?;
        for q in exponent_grid() {
            for p in exponent_grid() {
                let query = NormQuery::new(q, p);
                let plain = norm_q_to_p(&phi, &query, cfg)?.value;
                let herm = norm_q_to_p(&phi, &query.hermitian(true), cfg)?.value;
                let psd = cp_norm(&phi, &query, cfg)?.value;
                let hi = plain.max(herm).max(psd);
                let lo = plain.min(herm).min(psd);
                log.record(format!("trial {t} {n}->{m} q={q} p={p}: plain, hermitian, psd"), hi - lo, vec![plain, herm, psd]);
            }
        }
    }
    Ok(trials)
}

fn lemma1(log: &mut Log, seed: u64, trials: usize, cfg: &OptimizerConfig) -> Result<usize> {
    for t in 0..trials {
        let (mut rng, s) = trial_rng(seed, t);
        let (n, m, k) = (small_dim(&mut rng), small_dim(&mut rng), rng.gen_range(1..=3));
        let phi = random_superop(n, m, k, s)?;
        for q in exponent_grid() {
            for p in exponent_grid() {
                let (lhs, rhs) = lemma1_bound(&phi, &NormQuery::new(q, p), cfg)?;
                log.record(format!("trial {t} {n}->{m} q={q} p={p}: lhs, rhs"), (lhs - rhs).max(0.0), vec![lhs, rhs]);
            }
        }
    }
    Ok(trials)
}

fn prop_counterexamples(log: &mut Log, cfg: &OptimizerConfig) -> Result<usize> {
    let one = SchattenExponent::ONE;
    let inf = SchattenExponent::INFINITY;
    let pair = |log: &mut Log, name: &str, phi: &SuperOp, q: SchattenExponent, p: SchattenExponent, plain: f64, herm: f64| -> Result<()> {
        let query = NormQuery::new(q, p);
        let got_plain = norm_q_to_p(phi, &query, cfg)?.value;
        let got_herm = norm_q_to_p(phi, &query.hermitian(true), cfg)?.value;
        log.equal(format!("{name} q={q} p={p}: plain, expected"), got_plain, plain);
        log.equal(format!("{name} q={q} p={p}: hermitian, expected"), got_herm, herm);
        Ok(())
    };

    let simple = simple_nonhermitian();
    for q in [1.0, 2.0, 4.0] {
        for p in [one, inf] {
            pair(log, "simple_nonhermitian", &simple, SchattenExponent::finite(q), p, 1.0, 2f64.powf(-1.0 / q))?;
        }
    }
    for p in [one, SchattenExponent::TWO] {
        pair(log, "qinf_nonhermitian", &qinf_nonhermitian(), inf, p, 1.0, 1.0 / SQRT_2)?;
    }
    let depol = build_example("depolarizing_pair")?.combined();
    for p in [SchattenExponent::finite(1.5), SchattenExponent::TWO, inf] {
        let herm = match p.is_infinite() {
            true => 0.5,
            false => 2f64.powf(1.0 / p.value()) / 2.0,
        };
        pair(log, "depolarizing_pair", &depol, one, p, 1.0, herm)?;
    }
    let dim4 = build_example("dim4_pair")?.combined();
    pair(log, "dim4_pair", &dim4, one, one, 2.0, SQRT_2)?;
    let grid = brute_force_oracle(&dim4, &NormQuery::new(one, one).hermitian(true), 200)?;
    log.equal("dim4_pair hermitian grid oracle, expected".into(), grid, SQRT_2);
    Ok(1)
}

fn theorem2(log: &mut Log, seed: u64, trials: usize, cfg: &OptimizerConfig) -> Result<usize> {
    let ps = [SchattenExponent::TWO, SchattenExponent::finite(3.0), SchattenExponent::INFINITY];
    let qs = [SchattenExponent::ONE, SchattenExponent::finite(1.5), SchattenExponent::TWO];
    for t in 0..trials {
        let (mut rng, s) = trial_rng(seed, t);
        let (n, m, k) = (small_dim(&mut rng), small_dim(&mut rng), rng.gen_range(1..=3));
        let phi = random_superop(n, m, k, s)?;
        for q in qs {
            for p in ps {
                let query = NormQuery::new(q, p);
                let plain = norm_q_to_p(&phi, &query, cfg)?.value;
                for anc in [2, 3] {
                    let stab = norm_q_to_p(&phi, &query.stabilized(anc), cfg)?.value;
                    log.equal(format!("trial {t} {n}->{m} q={q} p={p} k={anc}: stabilized, plain"), stab, plain);
                }
            }
        }
    }
    Ok(trials)
}

fn theorem3(log: &mut Log, seed: u64, trials: usize, cfg: &OptimizerConfig) -> Result<usize> {
    for t in 0..trials {
        let (mut rng, s) = trial_rng(seed, t);
        let (n, m, k) = (small_dim(&mut rng), small_dim(&mut rng), rng.gen_range(1..=3));
        let phi = random_superop(n, m, k, s)?;
        for p in exponent_grid() {
            for herm in [false, true] {
                let query = NormQuery::new(SchattenExponent::ONE, p).hermitian(herm);
                let at_n = norm_q_to_p(&phi, &query.stabilized(n), cfg)?.value;
                let above = norm_q_to_p(&phi, &query.stabilized(n + 1), cfg)?.value;
                let kind = if herm { "hermitian" } else { "plain" };
                log.equal(format!("trial {t} {n}->{m} p={p} {kind}: k={n}, k={}", n + 1), at_n, above);
            }
        }
    }
    Ok(trials)
}

fn transpose_instability(log: &mut Log, cfg: &OptimizerConfig) -> Result<usize> {
    for n in [2usize, 3] {
        let t = transpose(n);
        for p in [1.0, 1.5, 2.0] {
            let pe = SchattenExponent::finite(p);
            let query = NormQuery::new(SchattenExponent::ONE, pe);
            let expected = (n as f64).powf(2.0 / p) / n as f64;
            let stab = norm_q_to_p(&t, &query.stabilized(n), cfg)?.value;
            log.equal(format!("T{n} p={p}: stabilized, n^(2/p)/n"), stab, expected);
            let plain = norm_q_to_p(&t, &query, cfg)?.value;
            log.equal(format!("T{n} p={p}: plain, 1"), plain, 1.0);
        }
    }
    Ok(1)
}

fn ahw_fact(log: &mut Log, seed: u64, trials: usize, cfg: &OptimizerConfig) -> Result<usize> {
    let ps = [SchattenExponent::ONE, SchattenExponent::TWO, SchattenExponent::INFINITY];
    for t in 0..trials {
        let (mut rng, s) = trial_rng(seed, t);
        let (n, m, k) = (small_dim(&mut rng), small_dim(&mut rng), rng.gen_range(1..=3));
        let phi = random_cp_channel(n, m, k, s)?;
        for p in ps {
            let query = NormQuery::new(SchattenExponent::ONE, p).hermitian(true);
            let plain = norm_q_to_p(&phi, &query, cfg)?.value;
            let stab = norm_q_to_p(&phi, &query.stabilized(2), cfg)?.value;
            log.equal(format!("trial {t} {n}->{m} p={p}: hermitian, stabilized hermitian"), plain, stab);
        }
    }
    Ok(trials)
}

fn random_exponent(rng: &mut ChaCha8Rng) -> SchattenExponent {
    match rng.gen_range(0..4) {
        0 => SchattenExponent::ONE,
        1 => SchattenExponent::TWO,
        2 => SchattenExponent::INFINITY,
        _ => SchattenExponent::finite(rng.gen_range(1.0..8.0)),
    }
}

/// Gaussian matrix of random shape, occasionally of reduced rank.
fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize) -> ComplexMatrix {
    let (r, c) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
    let x = random::gaussian_matrix(r, c, rng);
    if rng.gen_bool(0.2) {
        let k = rng.gen_range(1..=r.min(c));
        let a = random::gaussian_matrix(r, k, rng);
        let b = random::gaussian_matrix(k, c, rng);
        return a.matmul(&b);
    }
    x
}

fn duality(log: &mut Log, seed: u64, trials: usize) -> Result<usize> {
    for t in 0..trials {
        let (mut rng, _) = trial_rng(seed, t);
        let x = random_matrix(&mut rng, 5);
        let p = random_exponent(&mut rng);
        let y = duality_witness(&x, p)?;
        let nx = schatten_norm(&x, p);
        let ny = schatten_norm(&y, p.dual());
        let ip = y.inner(&x)?;
        let res = (ny - 1.0).abs().max((ip - C64::new(nx, 0.0)).norm() / nx.max(1.0));
        log.record(format!("trial {t} p={p}: ||Y||_p*, <Y,X>, ||X||_p"), res, vec![ny, ip.re, nx]);
    }
    Ok(trials)
}

fn hoelder(log: &mut Log, seed: u64, trials: usize) -> Result<usize> {
    for t in 0..trials {
        let (mut rng, _) = trial_rng(seed, t);
        let x = random_matrix(&mut rng, 5);
        let y = random::gaussian_matrix(x.rows(), x.cols(), &mut rng);
        let p = random_exponent(&mut rng);
        let gap = hoelder_gap(&x, &y, p)?;
        let scale = schatten_norm(&x, p) * schatten_norm(&y, p.dual());
        log.record(format!("trial {t} p={p}: gap, bound"), (-gap / scale.max(1.0)).max(0.0), vec![gap, scale]);
    }
    Ok(trials)
}

fn block_bounds(log: &mut Log, seed: u64, trials: usize) -> Result<usize> {
    for t in 0..trials {
        let (mut rng, _) = trial_rng(seed, t);
        let (gr, gc) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (br, bc) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let x = random::gaussian_matrix(gr * br, gc * bc, &mut rng);
        let p = random_exponent(&mut rng);
        let (blocks, whole) = block_norm_bounds(&x, gr, gc, p)?;
        let excess = if p.value() <= 2.0 { blocks - whole } else { whole - blocks };
        log.record(format!("trial {t} p={p} grid {gr}x{gc}: sum of blocks, whole"), (excess / whole).max(0.0), vec![blocks, whole]);
    }
    Ok(trials)
}

fn monotone_p(log: &mut Log, seed: u64, trials: usize) -> usize {
    for t in 0..trials {
        let (mut rng, _) = trial_rng(seed, t);
        let x = random_matrix(&mut rng, 5);
        let mut ps: Vec<f64> = vec![1.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY];
        ps.extend((0..3).map(|_| rng.gen_range(1.0..10.0)));
        ps.sort_by(f64::total_cmp);
        let norms: Vec<f64> = ps.iter().map(|&p| schatten_norm(&x, SchattenExponent::new(p).expect("valid"))).collect();
        let worst = norms.windows(2).map(|w| (w[1] - w[0]) / w[0].max(1.0)).fold(0.0, f64::max);
        log.record(format!("trial {t}: norms at increasing p"), worst, norms);
    }
    trials
}

fn svd_reconstruction(log: &mut Log, seed: u64, trials: usize) -> Result<usize> {
    for t in 0..trials {
        let (mut rng, _) = trial_rng(seed, t);
        let x = random_matrix(&mut rng, 6);
        let sd = svd(&x)?;
        let scale = x.max_abs().max(1.0);
        let res = sd.reconstruct().max_abs_diff(&x) / scale;
        let orth_l = (&sd.left_vectors.adjoint_matmul(&sd.left_vectors) - &ComplexMatrix::identity(sd.left_vectors.cols())).max_abs();
        let orth_r = (&sd.right_vectors.adjoint_matmul(&sd.right_vectors) - &ComplexMatrix::identity(sd.right_vectors.cols())).max_abs();
        log.record(format!("trial {t} {}x{}: reconstruction, orthogonality", x.rows(), x.cols()), res.max(orth_l).max(orth_r), vec![res, orth_l.max(orth_r)]);

        let (dg, df) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let v = random::gaussian_matrix(dg * df, 1, &mut rng);
        let nrm = vec_norm(v.entries());
        let v: Vec<C64> = v.entries().iter().map(|z| z / nrm).collect();
        let sch = schmidt(&v, dg, df)?;
        let mut back = vec![C64::new(0.0, 0.0); dg * df];
        for (i, s) in sch.singular_values.iter().enumerate() {
            let (l, r) = (sch.left(i), sch.right(i));
            for a in 0..dg {
                for b in 0..df {
                    back[a * df + b] += l[a] * r[b] * s;
                }
            }
        }
        let err = back.iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        log.record(format!("trial {t} schmidt {dg}x{df}: reconstruction"), err, vec![err]);
    }
    Ok(trials)
}

fn cp_positivity(log: &mut Log, seed: u64, trials: usize) -> Result<usize> {
    for t in 0..trials {
        let (mut rng, s) = trial_rng(seed, t);
        let (n, m, k) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
        let phi = if rng.gen_bool(0.5) {
            random_cp_channel(n, m, k, s)?
        } else {
            let g = random_superop(n, m, k, s)?;
            SuperOp::completely_positive(n, m, g.kraus_left().to_vec())?
        };
        let r = rng.gen_range(1..=n);
        let w = random::gaussian_matrix(r, n, &mut rng);
        let x = w.adjoint_matmul(&w);
        let y = phi.apply(&x)?;
        let herm = (&y - &y.adjoint()).max_abs();
        let lo = eigh(&y.hermitian_part())?.values[0];
        let scale = schatten_norm(&y, SchattenExponent::INFINITY).max(1.0);
        let res = ((-lo).max(0.0) / scale).max(herm / scale);
        log.record(format!("trial {t} {n}->{m}: min eigenvalue, hermiticity defect"), res, vec![lo, herm]);
    }
    Ok(trials)
}

fn oracle_concordance(log: &mut Log, seed: u64, trials: usize, cfg: &OptimizerConfig) -> Result<usize> {
    let corners = [SchattenExponent::ONE, SchattenExponent::TWO, SchattenExponent::INFINITY];
    for t in 0..trials {
        let (mut rng, s) = trial_rng(seed, t);
        let (q, p) = (corners[t % 3], corners[(t / 3) % 3]);
        let herm = (t / 9) % 2 == 1;
        let m = rng.gen_range(1..=3);
        let phi = random_superop(2, m, rng.gen_range(1..=2), s)?;
        let query = NormQuery::new(q, p).hermitian(herm);
        let opt = norm_q_to_p(&phi, &query, cfg)?.value;
        let grid = brute_force_oracle(&phi, &query, ORACLE_RESOLUTION)?;
        log.equal(format!("trial {t} 2->{m} q={q} p={p} hermitian={herm}: optimizer, oracle"), opt, grid);
    }
    Ok(trials)
}
