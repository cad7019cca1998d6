//! Jacobi-based singular value and Hermitian eigenvalue decompositions.
//!
//! Both routines are cyclic Jacobi sweeps. The one-sided variant used for the
//! SVD keeps normalized columns orthogonal to working precision independently
//! of their scale, which matters for the small singular values that feed the
//! `p < 2` Schatten norms.

use super::{vec_dot, vec_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{invalid, Result};

/// Relative cutoff below which a singular value is treated as zero.
pub const RANK_CUTOFF: f64 = 1e-12;

const MAX_SWEEPS: usize = 80;

/// Singular value (or Schmidt) decomposition `M = sum_i s_i |l_i><r_i|`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    /// Non-increasing, non-negative.
    pub singular_values: Vec<f64>,
    /// Orthonormal columns `|l_i>` (rows of `M` live here).
    pub left_vectors: ComplexMatrix,
    /// Orthonormal columns `|r_i>`.
    pub right_vectors: ComplexMatrix,
}

impl SpectralData {
    /// Number of singular values above `RANK_CUTOFF * s_1`.
    pub fn rank(&self) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            return 0;
        }
        self.singular_values.iter().filter(|&&s| s > RANK_CUTOFF * top).count()
    }

    pub fn left(&self, i: usize) -> Vec<C64> {
        self.left_vectors.column_vec(i)
    }

    pub fn right(&self, i: usize) -> Vec<C64> {
        self.right_vectors.column_vec(i)
    }

    /// `sum_i w_i |l_i><r_i|` for the given weights (missing weights are zero).
    pub fn synthesize(&self, weights: &[f64]) -> ComplexMatrix {
        let m = self.left_vectors.rows();
        let n = self.right_vectors.rows();
        let mut out = ComplexMatrix::zeros(m, n);
        for (k, &w) in weights.iter().enumerate().take(self.singular_values.len()) {
            if w == 0.0 {
                continue;
            }
            for i in 0..m {
                let l = self.left_vectors[(i, k)] * w;
                if l == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += l * self.right_vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    /// `sum_i s_i |l_i><r_i|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.synthesize(&self.singular_values)
    }
}

/// Thin singular value decomposition with `min(rows, cols)` singular values.
pub fn svd(m: &ComplexMatrix) -> Result<SpectralData> {
    if m.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return invalid("svd of a matrix with non-finite entries");
    }
    Ok(svd_unchecked(m))
}

pub(crate) fn svd_unchecked(m: &ComplexMatrix) -> SpectralData {
    if m.rows() >= m.cols() {
        let (s, u, v) = one_sided_jacobi(m, true);
        SpectralData { singular_values: s, left_vectors: u, right_vectors: v.unwrap() }
    } else {
        let (s, u, v) = one_sided_jacobi(&m.adjoint(), true);
        SpectralData { singular_values: s, left_vectors: v.unwrap(), right_vectors: u }
    }
}

/// Singular values only, non-increasing.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (s, _, _) = if m.rows() >= m.cols() {
        one_sided_jacobi(m, false)
    } else {
        one_sided_jacobi(&m.adjoint(), false)
    };
    s
}

/// Hestenes one-sided Jacobi for `rows >= cols`. Returns sorted singular
/// values, the left vectors (`rows x cols`), and optionally the right unitary.
fn one_sided_jacobi(m: &ComplexMatrix, want_v: bool) -> (Vec<f64>, ComplexMatrix, Option<ComplexMatrix>) {
    let (rows, n) = m.shape();
    debug_assert!(rows >= n);
    let mut a: Vec<Vec<C64>> = (0..n).map(|j| m.column_vec(j)).collect();
    let mut v: Vec<Vec<C64>> = if want_v {
        (0..n).map(|j| (0..n).map(|i| if i == j { ONE } else { ZERO }).collect()).collect()
    } else {
        Vec::new()
    };
    let tol = f64::EPSILON * rows as f64;

    let mut sq: Vec<f64> = vec![0.0; n];
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        // Squared column norms, refreshed each sweep and carried through
        // the rotations in between.
        for (d, col) in sq.iter_mut().zip(&a) {
            *d = col.iter().map(|z| z.norm_sqr()).sum();
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta) = (sq[p], sq[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = vec_dot(&a[p], &a[q]);
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut a, p, q, c, s, phase);
                sq[p] = (alpha - t * g).max(0.0);
                sq[q] = beta + t * g;
                if want_v {
                    rotate_pair(&mut v, p, q, c, s, phase);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut norms: Vec<(f64, usize)> = a.iter().map(|col| (vec_norm(col), 0)).collect();
    for (j, e) in norms.iter_mut().enumerate() {
        e.1 = j;
    }
    norms.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let values: Vec<f64> = norms.iter().map(|e| e.0).collect();
    let top = values.first().copied().unwrap_or(0.0);

    let mut left: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (k, &(s, j)) in norms.iter().enumerate() {
        if s > RANK_CUTOFF * top && s > 0.0 {
            left.push(a[j].iter().map(|z| z / s).collect());
        } else {
            left.push(Vec::new());
            missing.push(k);
        }
    }
    complete_orthonormal(&mut left, &missing, rows);

    let u = ComplexMatrix::from_fn(rows, n, |i, k| left[k][i]);
    let vmat = want_v.then(|| ComplexMatrix::from_fn(n, n, |i, k| v[norms[k].1][i]));
    (values, u, vmat)
}

/// Columns `p`, `q` <- `(c a_p - s e a_q, s a_p + c e a_q)` with `e` a unit phase.
#[inline]
fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    let ap = &mut lo[p];
    let aq = &mut hi[0];
    for (x, y) in ap.iter_mut().zip(aq.iter_mut()) {
        let yq = *y * phase;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Fills the empty slots listed in `missing` with unit vectors orthogonal to
/// every other slot, drawing candidates from the standard basis.
fn complete_orthonormal(vectors: &mut [Vec<C64>], missing: &[usize], dim: usize) {
    for &slot in missing {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for e in 0..dim {
            let mut cand: Vec<C64> = (0..dim).map(|i| if i == e { ONE } else { ZERO }).collect();
            for _ in 0..2 {
                for other in vectors.iter().filter(|o| !o.is_empty()) {
                    let proj = vec_dot(other, &cand);
                    for (c, o) in cand.iter_mut().zip(other) {
                        *c -= proj * o;
                    }
                }
            }
            let nrm = vec_norm(&cand);
            if best.as_ref().map_or(true, |(b, _)| nrm > *b) {
                best = Some((nrm, cand));
            }
        }
        let (nrm, cand) = best.expect("dimension is positive");
        vectors[slot] = cand.into_iter().map(|z| z / nrm).collect();
    }
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `sum_i f(lambda_i) |e_i><e_i|`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.map_values_indexed(|i| f(self.values[i]))
    }

    /// `sum_i g(i) |e_i><e_i|`.
    pub fn map_values_indexed(&self, g: impl Fn(usize) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let w = g(k);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += a * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Cyclic complex Jacobi eigensolver. The input is symmetrized first, so only
/// its Hermitian part is decomposed.
pub fn eigh(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return invalid(format!("eigh needs a square matrix, got {}x{}", h.rows(), h.cols()));
    }
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() <= f64::EPSILON * 0.5 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = a[(p, q)];
                let g = hpq.norm();
                if g < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = (hpq / g).conj();
                let zeta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // A <- A G with G = [[c, s], [-s e, c e]], e = conj(phase of h_pq).
                for r in 0..n {
                    let x = a[(r, p)];
                    let y = a[(r, q)] * phase;
                    a[(r, p)] = x * c - y * s;
                    a[(r, q)] = x * s + y * c;
                }
                // A <- G^* A
                let pc = phase.conj();
                for r in 0..n {
                    let x = a[(p, r)];
                    let y = a[(q, r)] * pc;
                    a[(p, r)] = x * c - y * s;
                    a[(q, r)] = x * s + y * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for r in 0..n {
                    let x = v[(r, p)];
                    let y = v[(r, q)] * phase;
                    v[(r, p)] = x * c - y * s;
                    v[(r, q)] = x * s + y * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// Square root of a Hermitian PSD matrix via its eigendecomposition; negative
/// eigenvalues (numerical noise) are clamped to zero.
pub fn psd_sqrt(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(x)?;
    Ok(eig.map_values(|l| l.max(0.0).sqrt()))
}

/// `|X| = sqrt(X^* X)`.
pub fn operator_abs(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (_, right) = left_right_absolutes(x)?;
    Ok(right)
}

/// `(sqrt(X X^*), sqrt(X^* X))`, both built from one SVD so they carry
/// exactly the singular values of `X`.
pub fn left_right_absolutes(x: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !x.is_square() {
        return invalid(format!("expected a square matrix, got {}x{}", x.rows(), x.cols()));
    }
    let sd = svd(x)?;
    let n = x.rows();
    let mut xl = ComplexMatrix::zeros(n, n);
    let mut xr = ComplexMatrix::zeros(n, n);
    for (k, &s) in sd.singular_values.iter().enumerate() {
        for i in 0..n {
            let l = sd.left_vectors[(i, k)] * s;
            let r = sd.right_vectors[(i, k)] * s;
            for j in 0..n {
                xl[(i, j)] += l * sd.left_vectors[(j, k)].conj();
                xr[(i, j)] += r * sd.right_vectors[(j, k)].conj();
            }
        }
    }
    Ok((xl.hermitian_part(), xr.hermitian_part()))
}

/// `||X - X^*||_inf <= tol`; non-square input is never Hermitian.
pub fn is_hermitian(x: &ComplexMatrix, tol: f64) -> bool {
    if !x.is_square() {
        return false;
    }
    let d = x - &x.adjoint();
    singular_values(&d).first().copied().unwrap_or(0.0) <= tol
}

/// Hermitian within `tol` and smallest eigenvalue `>= -tol`.
pub fn is_psd(x: &ComplexMatrix, tol: f64) -> bool {
    if !is_hermitian(x, tol) {
        return false;
    }
    match eigh(x) {
        Ok(e) => e.values.first().map_or(true, |&l| l >= -tol),
        Err(_) => false,
    }
}

/// Schmidt decomposition of `v` in `G (x) F`, with `v[g * dim_f + f]` the
/// coefficient of `|g>|f>`. Returns the `r` nonzero coefficients with
/// `v = sum_i s_i |l_i> (x) |r_i>`.
pub fn schmidt(v: &[C64], dim_g: usize, dim_f: usize) -> Result<SpectralData> {
    if dim_g == 0 || dim_f == 0 || v.len() != dim_g * dim_f {
        return invalid(format!(
            "vector of length {} does not split as {dim_g} x {dim_f}",
            v.len()
        ));
    }
    let norm = vec_norm(v);
    if (norm - 1.0).abs() > 1e-10 {
        return invalid(format!("Schmidt decomposition needs a unit vector, norm is {norm}"));
    }
    let m = ComplexMatrix::new(dim_g, dim_f, v.to_vec())?;
    let sd = svd(&m)?;
    let r = sd.rank().max(1);
    let left = ComplexMatrix::from_fn(dim_g, r, |i, k| sd.left_vectors[(i, k)]);
    // psi[g, f] = sum s l[g] r[f], while the SVD gives sum s l[g] conj(b[f]).
    let right = ComplexMatrix::from_fn(dim_f, r, |i, k| sd.right_vectors[(i, k)].conj());
    Ok(SpectralData {
        singular_values: sd.singular_values[..r].to_vec(),
        left_vectors: left,
        right_vectors: right,
    })
}
