//! Induced super-operator norms `||Phi||_{q->p}`, their Hermitian-restricted
//! and stabilized variants, and an independent grid oracle for small inputs.
//!
//! Every [`NormEstimate`] carries the maximizing operator it found, so the
//! reported value is always attained and is a lower bound on the true norm.

mod explore;
mod oracle;
mod search;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::ComplexMatrix;
use crate::schatten::SchattenExponent;
use crate::superop::SuperOp;

pub use explore::{explore_conclusion_questions, ExplorationEntry, ExplorationReport, Question};
pub use oracle::brute_force_oracle;
use search::{maximize, Domain};

/// Which norm to compute.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormQuery {
    pub q: SchattenExponent,
    pub p: SchattenExponent,
    /// Restrict the supremum to Hermitian `X`.
    pub hermitian_restricted: bool,
    /// Tensor with `I_k` before optimizing; `0` means no tensoring.
    pub stabilize_dim: usize,
}

impl NormQuery {
    pub fn new(q: SchattenExponent, p: SchattenExponent) -> Self {
        Self { q, p, hermitian_restricted: false, stabilize_dim: 0 }
    }

    pub fn hermitian(mut self, on: bool) -> Self {
        self.hermitian_restricted = on;
        self
    }

    pub fn stabilized(mut self, k: usize) -> Self {
        self.stabilize_dim = k;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Ascent iterations per restart; also the evaluation budget of the final
    /// compass refinement.
    pub max_iterations: usize,
    /// Smallest compass step.
    pub step_tolerance: f64,
    /// Relative gain below which an ascent counts as converged.
    pub objective_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 5000,
            step_tolerance: 1e-9,
            objective_tolerance: 1e-10,
            seed: 42,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return invalid("restarts must be at least 1");
        }
        if !(self.step_tolerance > 0.0 && self.objective_tolerance > 0.0) {
            return invalid("tolerances must be positive");
        }
        Ok(())
    }
}

/// Result of a norm maximization.
#[derive(Clone, Debug)]
pub struct NormEstimate {
    /// `||Phi(achiever)||_p`, recomputed from the achiever.
    pub value: f64,
    /// Maximizing input with `||achiever||_q = 1`.
    pub achiever: ComplexMatrix,
    pub restarts_used: usize,
    pub best_restart: usize,
    /// Whether the winning ascent stopped on the objective tolerance rather
    /// than the iteration cap.
    pub converged: bool,
}

fn prepare(phi: &SuperOp, stabilize_dim: usize, cfg: &OptimizerConfig) -> Result<SuperOp> {
    cfg.validate()?;
    if stabilize_dim > 0 {
        phi.tensor_identity(stabilize_dim)
    } else {
        Ok(phi.clone())
    }
}

/// `||Phi||_{1->p}` (or its Hermitian restriction), searched over `|u><v|`
/// (respectively `|u><u|`), where the supremum is known to be attained.
pub fn norm_1_to_p(
    phi: &SuperOp,
    p: SchattenExponent,
    hermitian: bool,
    cfg: &OptimizerConfig,
) -> Result<NormEstimate> {
    cfg.validate()?;
    let domain = if hermitian { Domain::Pure } else { Domain::RankOne };
    Ok(maximize(phi, SchattenExponent::ONE, p, domain, cfg))
}

/// `||Phi||_{q->p}` for any query. `q = 1` goes through [`norm_1_to_p`];
/// otherwise the search runs over all (or all Hermitian) `X`.
pub fn norm_q_to_p(phi: &SuperOp, query: &NormQuery, cfg: &OptimizerConfig) -> Result<NormEstimate> {
    let target = prepare(phi, query.stabilize_dim, cfg)?;
    if query.q.is_one() {
        return norm_1_to_p(&target, query.p, query.hermitian_restricted, cfg);
    }
    let domain = if query.hermitian_restricted { Domain::Hermitian } else { Domain::General };
    Ok(maximize(&target, query.q, query.p, domain, cfg))
}

/// Norm of a completely positive map, searched over positive semidefinite
/// inputs only; for such maps this is the unrestricted norm.
pub fn cp_norm(phi: &SuperOp, query: &NormQuery, cfg: &OptimizerConfig) -> Result<NormEstimate> {
    if !phi.is_completely_positive(1e-9) {
        return Err(Error::Precondition("cp_norm requires a completely positive map".into()));
    }
    let target = prepare(phi, query.stabilize_dim, cfg)?;
    if query.q.is_one() {
        return Ok(maximize(&target, SchattenExponent::ONE, query.p, Domain::Pure, cfg));
    }
    Ok(maximize(&target, query.q, query.p, Domain::Psd, cfg))
}

/// `||Phi (x) I_{dim_in}||_{1->p}`; with `p = 1` and `hermitian = false`
/// this is the diamond norm. Larger ancillas give the same value.
pub fn stabilized_norm(
    phi: &SuperOp,
    p: SchattenExponent,
    hermitian: bool,
    cfg: &OptimizerConfig,
) -> Result<NormEstimate> {
    let query = NormQuery::new(SchattenExponent::ONE, p).hermitian(hermitian).stabilized(phi.dim_in());
    norm_q_to_p(phi, &query, cfg)
}

/// Diamond norm `||Phi (x) I||_1`.
pub fn diamond_norm(phi: &SuperOp, cfg: &OptimizerConfig) -> Result<NormEstimate> {
    stabilized_norm(phi, SchattenExponent::ONE, false, cfg)
}

/// `(||Phi||_{q->p}, sqrt(||Phi_L||^H_{q->p} ||Phi_R||^H_{q->p}))`; the first
/// never exceeds the second. `query.hermitian_restricted` is ignored.
pub fn lemma1_bound(phi: &SuperOp, query: &NormQuery, cfg: &OptimizerConfig) -> Result<(f64, f64)> {
    let plain = NormQuery { hermitian_restricted: false, ..*query };
    let herm = NormQuery { hermitian_restricted: true, ..*query };
    let lhs = norm_q_to_p(phi, &plain, cfg)?.value;
    let left = norm_q_to_p(&phi.phi_l(), &herm, cfg)?.value;
    let right = norm_q_to_p(&phi.phi_r(), &herm, cfg)?.value;
    Ok((lhs, (left * right).sqrt()))
}

/// Re-evaluates `||Phi(X)||_p` for a candidate achiever, with the query's
/// stabilization applied.
pub fn evaluate_achiever(phi: &SuperOp, query: &NormQuery, x: &ComplexMatrix) -> Result<f64> {
    let target = if query.stabilize_dim > 0 { phi.tensor_identity(query.stabilize_dim)? } else { phi.clone() };
    let y = target.apply(x)?;
    Ok(crate::schatten::schatten_norm(&y, query.p))
}
