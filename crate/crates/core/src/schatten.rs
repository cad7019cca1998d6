//! Schatten p-norms, dual exponents and the inequalities built on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::matrix::{inner_unchecked, singular_values, svd, ComplexMatrix, C64};

/// A Schatten exponent `p` in `[1, inf]`. Infinity is stored as the IEEE
/// infinity and always handled as its own case.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct SchattenExponent(f64);

impl SchattenExponent {
    pub const ONE: Self = Self(1.0);
    pub const TWO: Self = Self(2.0);
    pub const INFINITY: Self = Self(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p.to_string()));
        }
        Ok(Self(p))
    }

    /// Infallible for literals known to be valid.
    pub fn finite(p: f64) -> Self {
        Self::new(p).expect("exponent must be >= 1")
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }

    /// `p*` with `1/p + 1/p* = 1`.
    pub fn dual(self) -> Self {
        if self.is_infinite() {
            Self::ONE
        } else if self.0 == 1.0 {
            Self::INFINITY
        } else {
            Self(self.0 / (self.0 - 1.0))
        }
    }
}

impl fmt::Display for SchattenExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Debug for SchattenExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={self}")
    }
}

impl FromStr for SchattenExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Self::INFINITY);
        }
        let p: f64 = t.parse().map_err(|_| Error::InvalidExponent(s.to_string()))?;
        if !p.is_finite() {
            return Err(Error::InvalidExponent(s.to_string()));
        }
        Self::new(p)
    }
}

impl Serialize for SchattenExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SchattenExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Free-function form of [`SchattenExponent::dual`].
pub fn dual_exponent(p: SchattenExponent) -> SchattenExponent {
    p.dual()
}

/// `p`-norm of a list of non-negative reals.
pub fn vector_p_norm(values: &[f64], p: SchattenExponent) -> f64 {
    let top = values.iter().copied().fold(0.0, f64::max);
    if p.is_infinite() || top == 0.0 {
        return top;
    }
    let pv = p.value();
    if pv == 1.0 {
        return values.iter().sum();
    }
    // Scaled by the largest value to keep powers in range; near p = 1 the
    // underflowing tail only adds noise.
    let floor = if pv < 1.0001 { 1e-300 } else { 0.0 };
    let sum: f64 = values
        .iter()
        .filter(|&&s| s > floor)
        .map(|&s| (s / top).powf(pv))
        .sum();
    top * sum.powf(1.0 / pv)
}

/// `||X||_p`, from the singular values of `X`.
pub fn schatten_norm(x: &ComplexMatrix, p: SchattenExponent) -> f64 {
    if p.value() == 2.0 {
        return x.frobenius_norm();
    }
    vector_p_norm(&singular_values(x), p)
}

/// Parses-and-checks wrapper for callers holding a raw `f64` exponent.
pub fn schatten_norm_f64(x: &ComplexMatrix, p: f64) -> Result<f64> {
    Ok(schatten_norm(x, SchattenExponent::new(p)?))
}

/// Weights `w` on singular values `s` with `||w||_{p*} = 1` and `<w, s> = ||s||_p`.
pub(crate) fn dual_weights(s: &[f64], rank: usize, p: SchattenExponent) -> Vec<f64> {
    let mut w = vec![0.0; s.len()];
    if rank == 0 {
        return w;
    }
    if p.is_infinite() {
        w[0] = 1.0;
    } else if p.is_one() {
        w[..rank].iter_mut().for_each(|x| *x = 1.0);
    } else {
        let norm = vector_p_norm(&s[..rank], p);
        let e = p.value() - 1.0;
        for (wi, si) in w.iter_mut().zip(&s[..rank]) {
            *wi = (si / norm).powf(e);
        }
    }
    w
}

/// Returns `Y` with `||Y||_{p*} = 1` and `<Y, X> = ||X||_p`.
///
/// Built from the SVD of `X`: the same singular vectors, with weights
/// proportional to `s_i^{p-1}` (flat on the support for `p = 1`, the top
/// singular pair only for `p = inf`).
pub fn duality_witness(x: &ComplexMatrix, p: SchattenExponent) -> Result<ComplexMatrix> {
    let sd = svd(x)?;
    let rank = sd.rank();
    if rank == 0 {
        return invalid("duality witness of the zero matrix");
    }
    let w = dual_weights(&sd.singular_values, rank, p);
    Ok(sd.synthesize(&w))
}

/// `(sum_{i,j} ||X_ij||_p^2, ||X||_p^2)` over the `block_rows x block_cols`
/// grid of contiguous blocks of `X`. For `p <= 2` the first entry is at most
/// the second; for `p >= 2` the order reverses.
pub fn block_norm_bounds(
    x: &ComplexMatrix,
    block_rows: usize,
    block_cols: usize,
    p: SchattenExponent,
) -> Result<(f64, f64)> {
    if block_rows == 0 || block_cols == 0 || x.rows() % block_rows != 0 || x.cols() % block_cols != 0 {
        return invalid(format!(
            "a {}x{} matrix does not split into a {block_rows}x{block_cols} grid of equal blocks",
            x.rows(),
            x.cols()
        ));
    }
    let (br, bc) = (x.rows() / block_rows, x.cols() / block_cols);
    let mut lhs = 0.0;
    for i in 0..block_rows {
        for j in 0..block_cols {
            lhs += schatten_norm(&x.block(i, j, br, bc), p).powi(2);
        }
    }
    Ok((lhs, schatten_norm(x, p).powi(2)))
}

/// `||X||_p ||Y||_{p*} - |<X, Y>|`, non-negative up to rounding.
pub fn hoelder_gap(x: &ComplexMatrix, y: &ComplexMatrix, p: SchattenExponent) -> Result<f64> {
    if x.shape() != y.shape() {
        return invalid("hoelder_gap needs operands of equal shape");
    }
    let ip: C64 = inner_unchecked(x, y);
    Ok(schatten_norm(x, p) * schatten_norm(y, p.dual()) - ip.norm())
}
