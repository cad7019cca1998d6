//! Dense complex matrices and the decompositions built on them.

mod decomp;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use decomp::{
    eigh, is_hermitian, is_psd, left_right_absolutes, operator_abs, psd_sqrt, schmidt,
    singular_values, svd, HermitianEigen, SpectralData,
};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix stored in row-major order.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// On-disk layout: `{"rows": n, "cols": m, "entries": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixFile> for ComplexMatrix {
    type Error = Error;

    fn try_from(file: MatrixFile) -> Result<Self> {
        let data = file
            .entries
            .into_iter()
            .map(|[re, im]| C64::new(re, im))
            .collect();
        ComplexMatrix::new(file.rows, file.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixFile {
    fn from(m: ComplexMatrix) -> Self {
        MatrixFile {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// length mismatches and non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid(format!("matrix dimensions must be positive, got {rows}x{cols}"));
        }
        if data.len() != rows * cols {
            return invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            ));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid(format!("non-finite entry at position {pos}"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return invalid("ragged rows");
        }
        Self::new(n, m, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(values: &[C64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// Column vector with the given entries.
    pub fn column(entries: &[C64]) -> Self {
        Self { rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    /// Standard basis vector `|i>` in dimension `n`, as an `n x 1` matrix.
    pub fn ket(n: usize, i: usize) -> Self {
        Self::from_fn(n, 1, |r, _| if r == i { ONE } else { ZERO })
    }

    /// `|u><v|` for column data `u`, `v`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// `|i><j|` with `rows x cols` shape.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(i, j)] = ONE;
        m
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }
    pub fn column_vec(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * alpha).collect() }
    }

    pub fn scale_real(&self, alpha: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * alpha).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(X + X*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        debug_assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Matrix product; panics on shape mismatch (use [`Self::try_matmul`] for a checked version).
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let row = &mut out[i * m..(i + 1) * m];
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[l * m..(l + 1) * m];
                for (o, &b) in row.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Self { rows: n, cols: m, data: out }
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            ));
        }
        Ok(self.matmul(rhs))
    }

    /// `self * rhs^*` without materializing the adjoint.
    pub fn matmul_adjoint(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols, "matmul_adjoint shape mismatch");
        let (n, k, m) = (self.rows, self.cols, rhs.rows);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let a = &self.data[i * k..(i + 1) * k];
            for j in 0..m {
                let b = &rhs.data[j * k..(j + 1) * k];
                out[i * m + j] = a.iter().zip(b).map(|(&x, &y)| x * y.conj()).sum();
            }
        }
        Self { rows: n, cols: m, data: out }
    }

    /// `self^* * rhs` without materializing the adjoint.
    pub fn adjoint_matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "adjoint_matmul shape mismatch");
        let (k, n, m) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; n * m];
        for l in 0..k {
            let arow = &self.data[l * n..(l + 1) * n];
            let brow = &rhs.data[l * m..(l + 1) * m];
            for (i, &a) in arow.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let a = a.conj();
                let row = &mut out[i * m..(i + 1) * m];
                for (o, &b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Self { rows: n, cols: m, data: out }
    }

    /// Matrix-vector product.
    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "apply_vec shape mismatch");
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Kronecker product in the standard layout: entry `((i*rB + k), (j*cB + l)) = A[i,j] * B[k,l]`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (rb, cb) = other.shape();
        Self::from_fn(self.rows * rb, self.cols * cb, |r, c| {
            self[(r / rb, c / cb)] * other[(r % rb, c % cb)]
        })
    }

    /// Trace inner product `<X, Y> = tr(X^* Y)`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.shape() != other.shape() {
            return invalid(format!(
                "inner product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        Ok(inner_unchecked(self, other))
    }

    /// Extracts the `block_rows x block_cols` submatrix at block position `(bi, bj)`.
    pub fn block(&self, bi: usize, bj: usize, block_rows: usize, block_cols: usize) -> Self {
        Self::from_fn(block_rows, block_cols, |i, j| {
            self[(bi * block_rows + i, bj * block_cols + j)]
        })
    }

    pub(crate) fn add_assign_scaled(&mut self, other: &Self, alpha: C64) {
        debug_assert_eq!(self.shape(), other.shape());
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    /// Max entry distance between two matrices of equal shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn inner_unchecked(x: &ComplexMatrix, y: &ComplexMatrix) -> C64 {
    x.data.iter().zip(&y.data).map(|(a, b)| a.conj() * b).sum()
}

/// Free-function form of [`ComplexMatrix::tensor`].
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.tensor(b)
}

/// Free-function form of [`ComplexMatrix::inner`].
pub fn inner(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<C64> {
    x.inner(y)
}

pub(crate) fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn vec_dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(ComplexMatrix::new(2, 2, vec![ONE; 3]).is_err());
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![c(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn tensor_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.tensor(&i2), ComplexMatrix::identity(4));

        let a = ComplexMatrix::real_diag(&[1.0, 2.0]);
        let b = ComplexMatrix::real_diag(&[3.0, 4.0]);
        assert_eq!(a.tensor(&b), ComplexMatrix::real_diag(&[3.0, 4.0, 6.0, 8.0]));

        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let ket0 = ComplexMatrix::ket(2, 0);
        // Row (i, k), column j holds X[i, j] * ket0[k].
        let expected =
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0], &[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(x.tensor(&ket0), expected);
    }

    #[test]
    fn inner_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.inner(&i2).unwrap(), c(2.0, 0.0));

        let p0 = ComplexMatrix::unit(2, 2, 0, 0);
        let p1 = ComplexMatrix::unit(2, 2, 1, 1);
        assert_eq!(p0.inner(&p1).unwrap(), ZERO);

        let x = ComplexMatrix::from_rows(&[vec![ONE, c(0.0, 1.0)], vec![ZERO, ZERO]]).unwrap();
        assert_eq!(x.inner(&p0).unwrap(), ONE);

        assert!(i2.inner(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn adjoint_products_match_explicit() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64 + 0.5, j as f64 - 1.0));
        let b = ComplexMatrix::from_fn(4, 2, |i, j| c((i * j) as f64, 1.0 - i as f64));
        assert!(a.matmul_adjoint(&b).max_abs_diff(&a.matmul(&b.adjoint())) < 1e-14);
        let d = ComplexMatrix::from_fn(3, 5, |i, j| c(j as f64, i as f64));
        assert!(a.adjoint_matmul(&d).max_abs_diff(&a.adjoint().matmul(&d)) < 1e-14);
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, -2.0), c(0.25, 0.0)]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"entries":[[1.0,-2.0],[0.25,0.0]]}"#);
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);

        let bad = r#"{"rows":2,"cols":2,"entries":[[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
        let overflow = r#"{"rows":1,"cols":1,"entries":[[1e999,0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(overflow).is_err());
    }
}
