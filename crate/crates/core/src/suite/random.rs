//! Seeded generators for random test instances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::matrix::{psd_sqrt, singular_values, ComplexMatrix, C64, ONE};
use crate::superop::SuperOp;

pub(crate) fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
}

/// Mixes a base seed with a trial index into an independent seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Completely positive, trace-preserving map with `n_kraus` Gaussian Kraus
/// operators plus completion terms.
///
/// The drawn operators are scaled so that `S = sum_i A_i^* A_i` has norm
/// `0.81`, and `K = sqrt(I - S)` is appended. When `dim_out < dim_in`, `K`
/// is split into row blocks of height `dim_out`, one term per block.
pub fn random_cp_channel(dim_in: usize, dim_out: usize, n_kraus: usize, seed: u64) -> Result<SuperOp> {
    if dim_in == 0 || dim_out == 0 || n_kraus == 0 {
        return invalid("random_cp_channel needs positive dimensions and at least one Kraus operator");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kraus: Vec<ComplexMatrix> = (0..n_kraus).map(|_| gaussian_matrix(dim_out, dim_in, &mut rng)).collect();
    let mut s = ComplexMatrix::zeros(dim_in, dim_in);
    for a in &kraus {
        s.add_assign_scaled(&a.adjoint_matmul(a), ONE);
    }
    let scale = 0.9 / singular_values(&s)[0].sqrt();
    kraus.iter_mut().for_each(|a| *a = a.scale_real(scale));
    let rest = &ComplexMatrix::identity(dim_in) - &s.scale_real(scale * scale);
    let k = psd_sqrt(&rest.hermitian_part())?;
    for start in (0..dim_in).step_by(dim_out) {
        kraus.push(ComplexMatrix::from_fn(dim_out, dim_in, |i, j| {
            if start + i < dim_in {
                k[(start + i, j)]
            } else {
                C64::new(0.0, 0.0)
            }
        }));
    }
    SuperOp::completely_positive(dim_in, dim_out, kraus)
}

/// Generalized Kraus map with independent Gaussian left and right lists,
/// entries of variance `1 / dim_in` per real component.
pub fn random_superop(dim_in: usize, dim_out: usize, n_terms: usize, seed: u64) -> Result<SuperOp> {
    if dim_in == 0 || dim_out == 0 || n_terms == 0 {
        return invalid("random_superop needs positive dimensions and at least one term");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = 1.0 / (dim_in as f64).sqrt();
    let left = (0..n_terms).map(|_| gaussian_matrix(dim_out, dim_in, &mut rng).scale_real(s)).collect();
    let right = (0..n_terms).map(|_| gaussian_matrix(dim_out, dim_in, &mut rng).scale_real(s)).collect();
    SuperOp::new(dim_in, dim_out, left, right)
}
