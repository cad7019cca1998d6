//! Numeric probes for three open questions about induced norms. Each probe
//! reports sampled values only and never states an answer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{cp_norm, norm_q_to_p, NormQuery, OptimizerConfig};
use crate::error::{invalid, Result};
use crate::matrix::{vec_dot, vec_norm, ComplexMatrix, C64};
use crate::superop::SuperOp;

/// Number of re-mixed representations sampled for
/// [`Question::RepresentationInfimum`], including the given one.
pub const REMIX_SAMPLES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Question {
    /// Is `||Phi (x) I||^2` the infimum of `||Phi_L|| ||Phi_R||` over
    /// representations?
    RepresentationInfimum,
    /// Does `||Phi (x) I_k||_{q->p}` stop growing at `k = dim_in`?
    AncillaStability,
    /// The same question restricted to completely positive maps.
    CpAncillaStability,
}

impl Question {
    /// Maps `1`, `2`, `3` to the three questions.
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Self::RepresentationInfimum),
            2 => Ok(Self::AncillaStability),
            3 => Ok(Self::CpAncillaStability),
            _ => invalid(format!("question must be 1, 2 or 3, got {i}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationEntry {
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationReport {
    pub question: Question,
    pub query: NormQuery,
    pub entries: Vec<ExplorationEntry>,
}

impl ExplorationReport {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.label == label).map(|e| e.value)
    }
}

/// Samples the quantities behind `question` for `phi` at `query.q`,
/// `query.p`. `query.hermitian_restricted` and `query.stabilize_dim` are
/// ignored.
///
/// * `RepresentationInfimum`: entries `stabilized_squared`
///   (`||Phi (x) I_{dim_in}||^2`), `product_<i>` for each sampled
///   representation and `min_product`.
/// * `AncillaStability`, `CpAncillaStability`: entries `k=<k>` for
///   `k = 1..=dim_in + 2`.
pub fn explore_conclusion_questions(
    phi: &SuperOp,
    question: Question,
    query: &NormQuery,
    cfg: &OptimizerConfig,
) -> Result<ExplorationReport> {
    if phi.dim_in() > 3 || phi.dim_out() > 3 {
        return invalid("exploration supports dimensions up to 3");
    }
    let base = NormQuery::new(query.q, query.p);
    let mut entries = Vec::new();
    let mut push = |label: String, value: f64| entries.push(ExplorationEntry { label, value });
    match question {
        Question::RepresentationInfimum => {
            let stab = norm_q_to_p(phi, &base.stabilized(phi.dim_in()), cfg)?.value;
            push("stabilized_squared".into(), stab * stab);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut best = f64::INFINITY;
            for i in 0..REMIX_SAMPLES {
                let rep = if i == 0 { phi.clone() } else { remix(phi, &mut rng)? };
                let left = cp_norm(&rep.phi_l(), &base, cfg)?.value;
                let right = cp_norm(&rep.phi_r(), &base, cfg)?.value;
                let product = left * right;
                best = best.min(product);
                push(format!("product_{i}"), product);
            }
            push("min_product".into(), best);
        }
        Question::AncillaStability | Question::CpAncillaStability => {
            let cp = question == Question::CpAncillaStability;
            for k in 1..=phi.dim_in() + 2 {
                let q = base.stabilized(k);
                let v = if cp { cp_norm(phi, &q, cfg)?.value } else { norm_q_to_p(phi, &q, cfg)?.value };
                push(format!("k={k}"), v);
            }
        }
    }
    Ok(ExplorationReport { question, query: base, entries })
}

/// Another representation of the same map: `A'_i = c_i sum_j U_ij A_j`,
/// `B'_i = c_i^{-1} sum_j U_ij B_j` for a random unitary `U` and positive
/// weights `c_i`.
fn remix(phi: &SuperOp, rng: &mut ChaCha8Rng) -> Result<SuperOp> {
    let m = phi.num_terms();
    let u = random_unitary(m, rng);
    let mix = |list: &[ComplexMatrix], scale: &[f64]| -> Vec<ComplexMatrix> {
        (0..m)
            .map(|i| {
                let mut acc = ComplexMatrix::zeros(list[0].rows(), list[0].cols());
                for (j, op) in list.iter().enumerate() {
                    acc.add_assign_scaled(op, u[(i, j)] * scale[i]);
                }
                acc
            })
            .collect()
    };
    let c: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0f64..1.0).exp()).collect();
    let inv: Vec<f64> = c.iter().map(|x| 1.0 / x).collect();
    SuperOp::new(phi.dim_in(), phi.dim_out(), mix(phi.kraus_left(), &c), mix(phi.kraus_right(), &inv))
}

/// Gram-Schmidt on Gaussian columns.
pub(crate) fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n)
            .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        for c in &cols {
            let proj = vec_dot(c, &v);
            for (x, y) in v.iter_mut().zip(c) {
                *x -= proj * y;
            }
        }
        let nrm = vec_norm(&v);
        if nrm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / nrm).collect());
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}
