//! Multi-restart local search for `max ||Phi(X)||_p` over `||X||_q = 1`.
//!
//! Each restart draws a random point on the unit sphere of the parameter
//! space and climbs with a dual-witness ascent: with `Z` the norming
//! functional of `Phi(X)` and `W = Phi^*(Z)`, the next point is the feasible
//! `X'` maximizing `Re <W, X'>`. Since
//! `||Phi(X')||_p >= Re <Z, Phi(X')> = Re <W, X'> >= Re <W, X> = ||Phi(X)||_p`,
//! the objective never decreases. The best restart is then refined with a
//! compass search in parameter space, which can move off the non-smooth
//! points where the ascent stalls.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{NormEstimate, OptimizerConfig};
use crate::matrix::{eigh, psd_sqrt, svd, vec_dot, vec_norm, ComplexMatrix, SpectralData, C64};
use crate::schatten::{dual_weights, schatten_norm, vector_p_norm, SchattenExponent};
use crate::superop::SuperOp;

/// Feasible set searched over. All points are normalized to `||X||_q = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Domain {
    /// `|u><v|` for unit `u`, `v`.
    RankOne,
    /// `|u><u|` for unit `u`.
    Pure,
    General,
    Hermitian,
    /// `W^* W`, normalized.
    Psd,
}

impl Domain {
    fn param_len(self, n: usize) -> usize {
        match self {
            Domain::RankOne => 4 * n,
            Domain::Pure => 2 * n,
            Domain::General | Domain::Psd => 2 * n * n,
            Domain::Hermitian => n * n,
        }
    }
}

/// A feasible point, keeping the rank-one factors when available.
#[derive(Clone, Debug)]
struct Point {
    x: ComplexMatrix,
    factors: Option<(Vec<C64>, Vec<C64>)>,
}

impl Point {
    fn rank_one(u: Vec<C64>, v: Vec<C64>) -> Option<Self> {
        let (nu, nv) = (vec_norm(&u), vec_norm(&v));
        if !(nu > 0.0 && nv > 0.0 && nu.is_finite() && nv.is_finite()) {
            return None;
        }
        let u: Vec<C64> = u.iter().map(|z| z / nu).collect();
        let v: Vec<C64> = v.iter().map(|z| z / nv).collect();
        Some(Self { x: ComplexMatrix::outer(&u, &v), factors: Some((u, v)) })
    }

    fn full(x: ComplexMatrix, q: SchattenExponent, hermitian: bool) -> Option<Self> {
        let x = if hermitian { x.hermitian_part() } else { x };
        let nrm = schatten_norm(&x, q);
        if !(nrm > 0.0 && nrm.is_finite()) {
            return None;
        }
        Some(Self { x: x.scale_real(1.0 / nrm), factors: None })
    }
}

struct Problem<'a> {
    phi: &'a SuperOp,
    q: SchattenExponent,
    p: SchattenExponent,
    domain: Domain,
    n: usize,
}

impl Problem<'_> {
    /// Singular value decomposition of `Phi(X)`. For rank-one points the
    /// output `sum_i (A_i u)(B_i v)^*` has rank at most the number of terms,
    /// so it is decomposed through a small core matrix.
    fn output_spectrum(&self, pt: &Point) -> Option<SpectralData> {
        if let Some((u, v)) = &pt.factors {
            let (l, r) = self.phi.rank_one_factors(u, v);
            if let Some(sd) = factored_svd(&l, &r) {
                return Some(sd);
            }
        }
        svd(&self.phi.apply_unchecked(&pt.x)).ok()
    }

    fn value(&self, pt: &Point) -> f64 {
        if pt.factors.is_some() {
            return self.output_spectrum(pt).map_or(f64::NAN, |sd| vector_p_norm(&sd.singular_values, self.p));
        }
        schatten_norm(&self.phi.apply_unchecked(&pt.x), self.p)
    }

    /// `||Phi(X)||_p` from the full output matrix.
    fn exact_value(&self, pt: &Point) -> f64 {
        schatten_norm(&self.phi.apply_unchecked(&pt.x), self.p)
    }

    fn from_params(&self, params: &[f64]) -> Option<Point> {
        let n = self.n;
        let cplx = |s: &[f64]| -> Vec<C64> { s.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect() };
        match self.domain {
            Domain::RankOne => Point::rank_one(cplx(&params[..2 * n]), cplx(&params[2 * n..])),
            Domain::Pure => {
                let u = cplx(params);
                Point::rank_one(u.clone(), u)
            }
            Domain::General => {
                let x = ComplexMatrix::from_raw(n, n, cplx(params));
                Point::full(x, self.q, false)
            }
            Domain::Hermitian => {
                let mut x = ComplexMatrix::zeros(n, n);
                let mut k = n;
                for i in 0..n {
                    x[(i, i)] = C64::new(params[i], 0.0);
                    for j in (i + 1)..n {
                        let z = C64::new(params[k], params[k + 1]);
                        x[(i, j)] = z;
                        x[(j, i)] = z.conj();
                        k += 2;
                    }
                }
                Point::full(x, self.q, true)
            }
            Domain::Psd => {
                let w = ComplexMatrix::from_raw(n, n, cplx(params));
                Point::full(w.adjoint_matmul(&w), self.q, true)
            }
        }
    }

    fn to_params(&self, pt: &Point) -> Vec<f64> {
        let flat = |v: &[C64]| -> Vec<f64> { v.iter().flat_map(|z| [z.re, z.im]).collect() };
        match self.domain {
            Domain::RankOne => {
                let (u, v) = pt.factors.as_ref().expect("rank-one point");
                let mut out = flat(u);
                out.extend(flat(v));
                out
            }
            Domain::Pure => flat(&pt.factors.as_ref().expect("rank-one point").0),
            Domain::General => flat(pt.x.entries()),
            Domain::Hermitian => {
                let n = self.n;
                let mut out: Vec<f64> = (0..n).map(|i| pt.x[(i, i)].re).collect();
                for i in 0..n {
                    for j in (i + 1)..n {
                        out.push(pt.x[(i, j)].re);
                        out.push(pt.x[(i, j)].im);
                    }
                }
                out
            }
            Domain::Psd => {
                let w = psd_sqrt(&pt.x).expect("square");
                flat(w.entries())
            }
        }
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> Point {
        let len = self.domain.param_len(self.n);
        loop {
            let raw: Vec<f64> = (0..len).map(|_| StandardNormal.sample(rng)).collect();
            let nrm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nrm == 0.0 {
                continue;
            }
            let params: Vec<f64> = raw.iter().map(|x| x / nrm).collect();
            if let Some(pt) = self.from_params(&params) {
                return pt;
            }
        }
    }

    /// Feasible maximizer of `Re <W, X>`; `None` when no feasible direction has
    /// positive correlation with `W`.
    fn best_response(&self, w: &ComplexMatrix) -> Option<Point> {
        let qd = self.q.dual();
        match self.domain {
            Domain::RankOne => {
                let sd = svd(w).ok()?;
                if sd.rank() == 0 {
                    return None;
                }
                Point::rank_one(sd.left(0), sd.right(0))
            }
            Domain::Pure => {
                let e = eigh(&w.hermitian_part()).ok()?;
                let (lo, hi) = (e.values[0], e.values[self.n - 1]);
                let k = if hi.abs() >= lo.abs() { self.n - 1 } else { 0 };
                if hi.abs().max(lo.abs()) == 0.0 {
                    return None;
                }
                let u = e.vectors.column_vec(k);
                Point::rank_one(u.clone(), u)
            }
            Domain::General => {
                let sd = svd(w).ok()?;
                let rank = sd.rank();
                if rank == 0 {
                    return None;
                }
                let weights = dual_weights(&sd.singular_values, rank, qd);
                Point::full(sd.synthesize(&weights), self.q, false)
            }
            Domain::Hermitian | Domain::Psd => {
                let e = eigh(&w.hermitian_part()).ok()?;
                let psd = self.domain == Domain::Psd;
                // Eigenvalues ordered by the magnitude that counts for this domain.
                let mut order: Vec<(f64, usize)> = e
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| (if psd { l.max(0.0) } else { l.abs() }, i))
                    .collect();
                order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
                let mags: Vec<f64> = order.iter().map(|o| o.0).collect();
                let top = mags[0];
                if top == 0.0 {
                    return None;
                }
                let rank = mags.iter().filter(|&&m| m > 1e-12 * top).count();
                let weights = dual_weights(&mags, rank, qd);
                let mut signed = vec![0.0; self.n];
                for (w, &(_, idx)) in weights.iter().zip(&order) {
                    signed[idx] = w * e.values[idx].signum();
                }
                let signed_ref = &signed;
                Point::full(e.map_values_indexed(|i| signed_ref[i]), self.q, true)
            }
        }
    }
}

struct RestartResult {
    point: Point,
    value: f64,
    converged: bool,
}

fn ascend(problem: &Problem, start: Point, cfg: &OptimizerConfig) -> RestartResult {
    let mut point = start;
    let mut converged = false;
    let Some(mut sd) = problem.output_spectrum(&point) else {
        return RestartResult { point, value: 0.0, converged };
    };
    let mut value = vector_p_norm(&sd.singular_values, problem.p);
    for _ in 0..cfg.max_iterations {
        let rank = sd.rank();
        if rank == 0 {
            converged = true;
            break;
        }
        let z = sd.synthesize(&dual_weights(&sd.singular_values, rank, problem.p));
        let w = problem.phi.apply_adjoint_unchecked(&z);
        let Some(next) = problem.best_response(&w) else {
            converged = true;
            break;
        };
        let Some(sd_next) = problem.output_spectrum(&next) else { break };
        let v_next = vector_p_norm(&sd_next.singular_values, problem.p);
        if !v_next.is_finite() {
            break;
        }
        let gain = v_next - value;
        if gain >= 0.0 {
            point = next;
            sd = sd_next;
            value = v_next;
        }
        if gain <= cfg.objective_tolerance * value.max(1.0) {
            converged = true;
            break;
        }
    }
    RestartResult { point, value, converged }
}

/// Orthonormal basis of the span of `cols`, dropping directions below
/// `1e-13` of the largest column.
fn orthonormal_basis(cols: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let scale = cols.iter().map(|c| vec_norm(c)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols.len());
    for c in cols {
        let mut v = c.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = vec_dot(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= proj * y;
                }
            }
        }
        let nrm = vec_norm(&v);
        if nrm > 1e-13 * scale && nrm > 0.0 {
            basis.push(v.into_iter().map(|z| z / nrm).collect());
        }
    }
    basis
}

/// SVD of `sum_i l_i r_i^*` via orthonormal bases `Q_l`, `Q_r` of the two
/// spans: the matrix equals `Q_l M Q_r^*` with a small core `M`.
fn factored_svd(l: &[Vec<C64>], r: &[Vec<C64>]) -> Option<SpectralData> {
    let ql = orthonormal_basis(l);
    let qr = orthonormal_basis(r);
    if ql.is_empty() || qr.is_empty() {
        return None;
    }
    let coeffs = |basis: &[Vec<C64>], cols: &[Vec<C64>]| -> Vec<Vec<C64>> {
        basis.iter().map(|b| cols.iter().map(|c| vec_dot(b, c)).collect()).collect()
    };
    let (rl, rr) = (coeffs(&ql, l), coeffs(&qr, r));
    let core = ComplexMatrix::from_fn(ql.len(), qr.len(), |a, b| {
        rl[a].iter().zip(&rr[b]).map(|(x, y)| x * y.conj()).sum()
    });
    let small = svd(&core).ok()?;
    let lift = |basis: &[Vec<C64>], vecs: &ComplexMatrix| {
        ComplexMatrix::from_fn(basis[0].len(), vecs.cols(), |x, j| {
            basis.iter().enumerate().map(|(a, b)| b[x] * vecs[(a, j)]).sum()
        })
    };
    Some(SpectralData {
        left_vectors: lift(&ql, &small.left_vectors),
        right_vectors: lift(&qr, &small.right_vectors),
        singular_values: small.singular_values,
    })
}

/// Hermitian local maxima often differ from better ones by the sign of one
/// eigenvalue. Tries each flip of the current point and resumes the ascent
/// from the best improving one, until no flip helps.
fn flip_signs(problem: &Problem, mut res: RestartResult, cfg: &OptimizerConfig) -> RestartResult {
    for _ in 0..4 * problem.n {
        let Ok(e) = eigh(&res.point.x) else { break };
        let mut best: Option<(f64, Point)> = None;
        for i in 0..problem.n {
            if e.values[i] == 0.0 {
                continue;
            }
            let flipped = e.map_values_indexed(|k| if k == i { -e.values[k] } else { e.values[k] });
            let Some(pt) = Point::full(flipped, problem.q, true) else { continue };
            let v = problem.value(&pt);
            if v > res.value && best.as_ref().map_or(true, |b| v > b.0) {
                best = Some((v, pt));
            }
        }
        let Some((_, pt)) = best else { break };
        let next = ascend(problem, pt, cfg);
        if next.value <= res.value {
            break;
        }
        res = next;
    }
    res
}

/// Consecutive unproductive step halvings after which the polish stops.
const IDLE_HALVINGS: usize = 8;

/// Opportunistic compass search on the parameter vector. Stops at
/// `step_tolerance`, after `max_iterations` evaluations, or once
/// `IDLE_HALVINGS` halvings in a row found nothing.
fn polish(problem: &Problem, start: &RestartResult, cfg: &OptimizerConfig) -> Option<RestartResult> {
    let mut params = problem.to_params(&start.point);
    let scale = params.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return None;
    }
    params.iter_mut().for_each(|x| *x /= scale);
    let mut best = start.value;
    let mut best_point: Option<Point> = None;
    let mut step = 1e-2;
    let mut evals = 0usize;
    let budget = cfg.max_iterations;
    let mut idle = 0;
    while step >= cfg.step_tolerance && evals < budget && idle < IDLE_HALVINGS {
        let mut improved = false;
        for i in 0..params.len() {
            for dir in [1.0, -1.0] {
                let old = params[i];
                params[i] = old + dir * step;
                evals += 1;
                if let Some(pt) = problem.from_params(&params) {
                    let v = problem.value(&pt);
                    if v > best {
                        best = v;
                        best_point = Some(pt);
                        improved = true;
                        break;
                    }
                }
                params[i] = old;
            }
            if evals >= budget {
                break;
            }
        }
        if improved {
            idle = 0;
        } else {
            step *= 0.5;
            idle += 1;
        }
    }
    best_point.map(|point| RestartResult { point, value: best, converged: start.converged })
}

/// Runs the seeded multi-restart search. Restart `r` uses stream `r` of a
/// ChaCha8 generator seeded with `cfg.seed`, so the result depends only on
/// `(phi, q, p, domain, cfg)`.
pub(crate) fn maximize(
    phi: &SuperOp,
    q: SchattenExponent,
    p: SchattenExponent,
    domain: Domain,
    cfg: &OptimizerConfig,
) -> NormEstimate {
    let problem = Problem { phi, q, p, domain, n: phi.dim_in() };

    let mut best: Option<(usize, RestartResult)> = None;
    for r in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(r as u64);
        let start = problem.random_point(&mut rng);
        let mut res = ascend(&problem, start, cfg);
        if domain == Domain::Hermitian {
            res = flip_signs(&problem, res, cfg);
        }
        if best.as_ref().map_or(true, |(_, b)| res.value > b.value) {
            best = Some((r, res));
        }
    }
    let (best_restart, mut result) = best.expect("at least one restart");

    if result.value > 0.0 {
        if let Some(better) = polish(&problem, &result, cfg) {
            result = better;
        }
    }

    let value = problem.exact_value(&result.point);
    NormEstimate {
        value,
        achiever: result.point.x,
        restarts_used: cfg.restarts,
        best_restart,
        converged: result.converged || value == 0.0,
    }
}
