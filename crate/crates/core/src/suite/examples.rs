//! Fixed example maps that separate the plain and Hermitian-restricted norms,
//! plus the transpose map.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::superop::SuperOp;

/// A single map or an ordered pair `(Phi_0, Phi_1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Example {
    Single(SuperOp),
    Pair(SuperOp, SuperOp),
}

impl Example {
    /// The map itself, or `Phi_0 - Phi_1` for a pair.
    pub fn combined(&self) -> SuperOp {
        match self {
            Example::Single(phi) => phi.clone(),
            Example::Pair(a, b) => a.difference(b).expect("pair members share dimensions"),
        }
    }
}

pub const EXAMPLE_NAMES: &[&str] =
    &["simple_nonhermitian", "qinf_nonhermitian", "depolarizing_pair", "dim4_pair", "transpose(n)"];

/// Looks up an example by name; `transpose(n)` takes any `n >= 1`.
pub fn build_example(name: &str) -> Result<Example> {
    let name = name.trim();
    match name {
        "simple_nonhermitian" => return Ok(Example::Single(simple_nonhermitian())),
        "qinf_nonhermitian" => return Ok(Example::Single(qinf_nonhermitian())),
        "depolarizing_pair" => {
            let (a, b) = depolarizing_pair();
            return Ok(Example::Pair(a, b));
        }
        "dim4_pair" => {
            let (a, b) = dim4_pair();
            return Ok(Example::Pair(a, b));
        }
        _ => {}
    }
    if let Some(arg) = name.strip_prefix("transpose(").and_then(|s| s.strip_suffix(')')) {
        return match arg.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Example::Single(transpose(n))),
            _ => invalid(format!("transpose needs a positive dimension, got {arg:?}")),
        };
    }
    invalid(format!("unknown example {name:?}; expected one of {}", EXAMPLE_NAMES.join(", ")))
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn ketbra(n: usize, i: usize, j: usize) -> ComplexMatrix {
    ComplexMatrix::unit(n, n, i, j)
}

/// `X -> |0><0| X |1><0|` on qubits.
pub fn simple_nonhermitian() -> SuperOp {
    SuperOp::new(2, 2, vec![ketbra(2, 0, 0)], vec![ketbra(2, 0, 1)]).expect("valid")
}

/// `X -> 1/2 |0><0| X |0><0| + i/2 |0><1| X |1><0|` on qubits.
pub fn qinf_nonhermitian() -> SuperOp {
    SuperOp::new(
        2,
        2,
        vec![ketbra(2, 0, 0).scale_real(0.5), ketbra(2, 0, 1).scale(c(0.0, 0.5))],
        vec![ketbra(2, 0, 0), ketbra(2, 0, 1)],
    )
    .expect("valid")
}

/// `(id, X -> tr(X) I / 2)` on qubits.
pub fn depolarizing_pair() -> (SuperOp, SuperOp) {
    let kraus = (0..2)
        .flat_map(|i| (0..2).map(move |j| ketbra(2, i, j).scale_real(FRAC_1_SQRT_2)))
        .collect();
    let depol = SuperOp::completely_positive(2, 2, kraus).expect("valid");
    (SuperOp::identity(2), depol)
}

/// Two qubit-to-ququart channels whose difference has trace norm 2 only on
/// a non-Hermitian input.
///
/// `Phi_0` has Kraus operators `|0><0|, |1><+|, |2><1|, |3><-|` and `Phi_1`
/// has `|0><1|, |1><-|, |2><0|, |3><+|`, each scaled by `1/sqrt(2)`.
pub fn dim4_pair() -> (SuperOp, SuperOp) {
    let h = FRAC_1_SQRT_2;
    let zero = [c(1.0, 0.0), c(0.0, 0.0)];
    let one = [c(0.0, 0.0), c(1.0, 0.0)];
    let plus = [c(h, 0.0), c(h, 0.0)];
    let minus = [c(h, 0.0), c(-h, 0.0)];
    let term = |out: usize, bra: &[C64; 2]| {
        let mut k = [c(0.0, 0.0); 4];
        k[out] = c(h, 0.0);
        ComplexMatrix::outer(&k, bra)
    };
    let phi0 = vec![term(0, &zero), term(1, &plus), term(2, &one), term(3, &minus)];
    let phi1 = vec![term(0, &one), term(1, &minus), term(2, &zero), term(3, &plus)];
    (
        SuperOp::completely_positive(2, 4, phi0).expect("valid"),
        SuperOp::completely_positive(2, 4, phi1).expect("valid"),
    )
}

/// `X -> X^T` on `n x n` matrices, as `sum_{ij} |i><j| X |i><j|`.
pub fn transpose(n: usize) -> SuperOp {
    let mut left = Vec::with_capacity(n * n);
    let mut right = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            left.push(ketbra(n, i, j));
            right.push(ketbra(n, j, i));
        }
    }
    SuperOp::new(n, n, left, right).expect("valid")
}
