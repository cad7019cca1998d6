//! Super-operators in generalized Kraus form `Phi(X) = sum_i A_i X B_i^*`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::{is_psd, singular_values, ComplexMatrix, C64, ONE};

/// A linear map `L(F) -> L(G)` stored as paired Kraus lists. The lists are
/// kept exactly as given: two representations of one map are only equal
/// through their action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelFile", into = "ChannelFile")]
pub struct SuperOp {
    dim_in: usize,
    dim_out: usize,
    kraus_left: Vec<ComplexMatrix>,
    kraus_right: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct ChannelFile {
    dim_in: usize,
    dim_out: usize,
    kraus_left: Vec<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kraus_right: Option<Vec<ComplexMatrix>>,
}

impl TryFrom<ChannelFile> for SuperOp {
    type Error = Error;

    fn try_from(f: ChannelFile) -> Result<Self> {
        let right = f.kraus_right.unwrap_or_else(|| f.kraus_left.clone());
        SuperOp::new(f.dim_in, f.dim_out, f.kraus_left, right)
    }
}

impl From<SuperOp> for ChannelFile {
    fn from(s: SuperOp) -> Self {
        let right = (s.kraus_right != s.kraus_left).then_some(s.kraus_right);
        ChannelFile { dim_in: s.dim_in, dim_out: s.dim_out, kraus_left: s.kraus_left, kraus_right: right }
    }
}

impl SuperOp {
    pub fn new(
        dim_in: usize,
        dim_out: usize,
        kraus_left: Vec<ComplexMatrix>,
        kraus_right: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return invalid("super-operator dimensions must be positive");
        }
        if kraus_left.is_empty() || kraus_left.len() != kraus_right.len() {
            return invalid(format!(
                "Kraus lists must be non-empty and of equal length (got {} and {})",
                kraus_left.len(),
                kraus_right.len()
            ));
        }
        for (i, k) in kraus_left.iter().chain(&kraus_right).enumerate() {
            if k.shape() != (dim_out, dim_in) {
                return invalid(format!(
                    "Kraus term {i} is {}x{}, expected {dim_out}x{dim_in}",
                    k.rows(),
                    k.cols()
                ));
            }
        }
        Ok(Self { dim_in, dim_out, kraus_left, kraus_right })
    }

    /// Completely positive form `sum_i A_i X A_i^*`.
    pub fn completely_positive(dim_in: usize, dim_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(dim_in, dim_out, kraus.clone(), kraus)
    }

    pub fn identity(n: usize) -> Self {
        let id = ComplexMatrix::identity(n);
        Self { dim_in: n, dim_out: n, kraus_left: vec![id.clone()], kraus_right: vec![id] }
    }

    /// Same map scaled by a real factor (applied to the left list).
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            kraus_left: self.kraus_left.iter().map(|a| a.scale_real(alpha)).collect(),
            ..self.clone()
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus_left(&self) -> &[ComplexMatrix] {
        &self.kraus_left
    }

    pub fn kraus_right(&self) -> &[ComplexMatrix] {
        &self.kraus_right
    }

    pub fn num_terms(&self) -> usize {
        self.kraus_left.len()
    }

    /// Whether the stored lists are literally identical (manifest CP form).
    pub fn is_cp_form(&self) -> bool {
        self.kraus_left == self.kraus_right
    }

    /// `sum_i A_i X B_i^*`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.dim_in, self.dim_in) {
            return invalid(format!(
                "input is {}x{}, map expects {n}x{n}",
                x.rows(),
                x.cols(),
                n = self.dim_in
            ));
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for (a, b) in self.kraus_left.iter().zip(&self.kraus_right) {
            let ax = a.matmul(x);
            out.add_assign_scaled(&ax.matmul_adjoint(b), ONE);
        }
        out
    }

    /// The vectors `(A_i u, B_i v)`, so that `Phi(|u><v|) = sum_i (A_i u)(B_i v)^*`.
    pub(crate) fn rank_one_factors(&self, u: &[C64], v: &[C64]) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
        let left = self.kraus_left.iter().map(|a| a.apply_vec(u)).collect();
        let right = self.kraus_right.iter().map(|b| b.apply_vec(v)).collect();
        (left, right)
    }

    /// Adjoint map with respect to the trace inner product: `sum_i A_i^* Y B_i`.
    pub fn apply_adjoint(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        if y.shape() != (self.dim_out, self.dim_out) {
            return invalid("adjoint input has the wrong shape");
        }
        Ok(self.apply_adjoint_unchecked(y))
    }

    pub(crate) fn apply_adjoint_unchecked(&self, y: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for (a, b) in self.kraus_left.iter().zip(&self.kraus_right) {
            let ay = a.adjoint_matmul(y);
            out.add_assign_scaled(&ay.matmul(b), ONE);
        }
        out
    }

    /// `Phi (x) I_k`, with Kraus terms `A_i (x) I_k`, `B_i (x) I_k`.
    pub fn tensor_identity(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return invalid("ancilla dimension must be at least 1");
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let id = ComplexMatrix::identity(k);
        Ok(Self {
            dim_in: self.dim_in * k,
            dim_out: self.dim_out * k,
            kraus_left: self.kraus_left.iter().map(|a| a.tensor(&id)).collect(),
            kraus_right: self.kraus_right.iter().map(|b| b.tensor(&id)).collect(),
        })
    }

    /// `X -> sum_i A_i X A_i^*` for the stored left list.
    pub fn phi_l(&self) -> Self {
        Self { kraus_right: self.kraus_left.clone(), ..self.clone() }
    }

    /// `X -> sum_i B_i X B_i^*` for the stored right list.
    pub fn phi_r(&self) -> Self {
        Self { kraus_left: self.kraus_right.clone(), ..self.clone() }
    }

    /// Block operator with `Phi(|i><j|)` at block `(i, j)`.
    pub fn choi(&self) -> ComplexMatrix {
        let (n, m) = (self.dim_in, self.dim_out);
        let mut c = ComplexMatrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                let blk = self.apply_unchecked(&ComplexMatrix::unit(n, n, i, j));
                for a in 0..m {
                    for b in 0..m {
                        c[(i * m + a, j * m + b)] = blk[(a, b)];
                    }
                }
            }
        }
        c
    }

    pub fn is_completely_positive(&self, tol: f64) -> bool {
        is_psd(&self.choi(), tol)
    }

    /// `sum_i B_i^* A_i = I` within `tol` in operator norm.
    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let mut s = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for (a, b) in self.kraus_left.iter().zip(&self.kraus_right) {
            s.add_assign_scaled(&b.adjoint_matmul(a), ONE);
        }
        let d = &s - &ComplexMatrix::identity(self.dim_in);
        singular_values(&d)[0] <= tol
    }

    /// `self - other`, by concatenating the lists with `other`'s right list negated.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return invalid(format!(
                "cannot subtract a {}->{} map from a {}->{} map",
                other.dim_in, other.dim_out, self.dim_in, self.dim_out
            ));
        }
        let mut left = self.kraus_left.clone();
        left.extend(other.kraus_left.iter().cloned());
        let mut right = self.kraus_right.clone();
        right.extend(other.kraus_right.iter().map(|b| b.scale_real(-1.0)));
        Self::new(self.dim_in, self.dim_out, left, right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ZERO;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ketbra(n: usize, i: usize, j: usize) -> ComplexMatrix {
        ComplexMatrix::unit(n, n, i, j)
    }

    /// X -> |0><0| X |1><0|
    fn simple_map() -> SuperOp {
        SuperOp::new(2, 2, vec![ketbra(2, 0, 0)], vec![ketbra(2, 0, 1)]).unwrap()
    }

    #[test]
    fn identity_map_is_identity() {
        let x = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64, j as f64 - 1.0));
        assert_eq!(SuperOp::identity(3).apply(&x).unwrap(), x);
    }

    #[test]
    fn simple_map_moves_off_diagonal_entry() {
        let out = simple_map().apply(&ketbra(2, 0, 1)).unwrap();
        assert_eq!(out, ketbra(2, 0, 0));
        let out = simple_map().apply(&ketbra(2, 1, 0)).unwrap();
        assert_eq!(out, ComplexMatrix::zeros(2, 2));
    }

    #[test]
    fn phi_l_phi_r_substitution() {
        let phi = SuperOp::new(2, 2, vec![ketbra(2, 0, 0)], vec![ketbra(2, 1, 1)]).unwrap();
        assert_eq!(phi.phi_l().kraus_right(), &[ketbra(2, 0, 0)]);
        assert_eq!(phi.phi_r().kraus_left(), &[ketbra(2, 1, 1)]);

        // B = |0><1| gives Phi_R(X) = |0><1| X |1><0|.
        let r = simple_map().phi_r();
        let x = ComplexMatrix::from_fn(2, 2, |i, j| c((2 * i + j) as f64 + 1.0, 0.5));
        let expected = ketbra(2, 0, 1).matmul(&x).matmul(&ketbra(2, 1, 0));
        assert_eq!(r.apply(&x).unwrap(), expected);
        assert!(r.is_completely_positive(1e-10));

        let cp = SuperOp::identity(2);
        assert_eq!(cp.phi_l(), cp);
        assert_eq!(cp.phi_r(), cp);
    }

    #[test]
    fn tensor_identity_examples() {
        let phi = simple_map();
        assert_eq!(phi.tensor_identity(1).unwrap(), phi);
        let id4 = SuperOp::identity(2).tensor_identity(2).unwrap();
        let x = ComplexMatrix::from_fn(4, 4, |i, j| c(i as f64, (j * i) as f64));
        assert_eq!(id4.apply(&x).unwrap(), x);
        assert!(phi.tensor_identity(0).is_err());

        let z = ComplexMatrix::from_fn(2, 2, |i, j| c(1.0 + i as f64, -(j as f64)));
        let x = ComplexMatrix::from_fn(2, 2, |i, j| c(j as f64, i as f64 + 2.0));
        let lhs = phi.tensor_identity(2).unwrap().apply(&x.tensor(&z)).unwrap();
        let rhs = phi.apply(&x).unwrap().tensor(&z);
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn adjoint_matches_inner_product() {
        let phi = SuperOp::new(
            2,
            3,
            vec![ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64 - j as f64, 0.3))],
            vec![ComplexMatrix::from_fn(3, 2, |i, j| c(0.1, (i + j) as f64))],
        )
        .unwrap();
        let x = ComplexMatrix::from_fn(2, 2, |i, j| c(i as f64 + 0.5, j as f64));
        let y = ComplexMatrix::from_fn(3, 3, |i, j| c(j as f64, 1.0 - i as f64));
        let lhs = y.inner(&phi.apply(&x).unwrap()).unwrap();
        let rhs = phi.apply_adjoint(&y).unwrap().inner(&x).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
        let (l, r) = phi.rank_one_factors(&[c(1.0, 2.0), c(0.0, -1.0)], &[c(0.5, 0.0), c(1.0, 1.0)]);
        let mut r1 = ComplexMatrix::zeros(3, 3);
        for (a, b) in l.iter().zip(&r) {
            r1 = &r1 + &ComplexMatrix::outer(a, b);
        }
        let full = phi
            .apply(&ComplexMatrix::outer(&[c(1.0, 2.0), c(0.0, -1.0)], &[c(0.5, 0.0), c(1.0, 1.0)]))
            .unwrap();
        assert!(r1.max_abs_diff(&full) < 1e-12);
    }

    #[test]
    fn structural_predicates() {
        assert!(SuperOp::identity(2).is_completely_positive(1e-10));
        assert!(SuperOp::identity(2).is_trace_preserving(1e-10));
        let half = SuperOp::identity(2).scaled(0.5);
        assert!(!half.is_trace_preserving(1e-10));

        // Transpose: X^T = sum_ij |i><j| X |i><j|.
        let mut left = Vec::new();
        let mut right = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                left.push(ketbra(2, i, j));
                right.push(ketbra(2, j, i));
            }
        }
        let t = SuperOp::new(2, 2, left, right).unwrap();
        assert!(!t.is_completely_positive(1e-10));
        assert!(t.is_trace_preserving(1e-10));
    }

    #[test]
    fn difference_examples() {
        let phi = simple_map();
        let d = phi.difference(&phi).unwrap();
        let x = ComplexMatrix::from_fn(2, 2, |i, j| c(i as f64 + 1.0, j as f64));
        assert!(d.apply(&x).unwrap().max_abs() < 1e-15);

        let d = SuperOp::identity(2).difference(&SuperOp::identity(2).scaled(0.5)).unwrap();
        assert!(d.apply(&ComplexMatrix::identity(2)).unwrap().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);

        assert!(phi.difference(&SuperOp::identity(3)).is_err());
    }

    #[test]
    fn constructor_checks_shapes() {
        assert!(SuperOp::new(2, 2, vec![], vec![]).is_err());
        assert!(SuperOp::new(2, 2, vec![ketbra(2, 0, 0)], vec![]).is_err());
        assert!(SuperOp::new(2, 3, vec![ketbra(2, 0, 0)], vec![ketbra(2, 0, 0)]).is_err());
        let x = ComplexMatrix::zeros(3, 3);
        assert!(simple_map().apply(&x).is_err());
        let _ = ZERO;
    }

    #[test]
    fn channel_json_defaults_right_list() {
        let json = r#"{"dim_in":1,"dim_out":1,"kraus_left":[{"rows":1,"cols":1,"entries":[[1.0,0.0]]}]}"#;
        let phi: SuperOp = serde_json::from_str(json).unwrap();
        assert!(phi.is_cp_form());
        assert_eq!(serde_json::to_string(&phi).unwrap(), json);

        let back: SuperOp = serde_json::from_str(&serde_json::to_string(&simple_map()).unwrap()).unwrap();
        assert_eq!(back, simple_map());

        let bad = r#"{"dim_in":2,"dim_out":1,"kraus_left":[{"rows":1,"cols":1,"entries":[[1.0,0.0]]}]}"#;
        assert!(serde_json::from_str::<SuperOp>(bad).is_err());
    }
}
