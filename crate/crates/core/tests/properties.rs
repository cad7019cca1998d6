use proptest::prelude::*;

use superop_norms::matrix::{is_psd, operator_abs, schmidt, svd, ComplexMatrix, C64};
use superop_norms::norm_opt::{evaluate_achiever, norm_q_to_p, NormQuery, OptimizerConfig};
use superop_norms::schatten::{block_norm_bounds, duality_witness, schatten_norm, SchattenExponent};
use superop_norms::suite::{random_superop, transpose};
use superop_norms::SuperOp;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
        ComplexMatrix::new(rows, cols, v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
    })
}

fn any_matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| matrix(r, c))
}

fn square(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n, n)
}

/// Unitary polar factor of a square matrix.
fn unitary_from(m: &ComplexMatrix) -> ComplexMatrix {
    let sd = svd(m).unwrap();
    sd.left_vectors.matmul_adjoint(&sd.right_vectors)
}

fn exponent() -> impl Strategy<Value = SchattenExponent> {
    prop_oneof![
        Just(SchattenExponent::ONE),
        Just(SchattenExponent::finite(1.5)),
        Just(SchattenExponent::TWO),
        Just(SchattenExponent::finite(3.0)),
        Just(SchattenExponent::INFINITY),
        (1.0f64..12.0).prop_map(SchattenExponent::finite),
    ]
}

fn op_norm(x: &ComplexMatrix) -> f64 {
    schatten_norm(x, SchattenExponent::INFINITY)
}

/// Generalized Kraus map with `terms` random pairs.
fn superop(n: usize, m: usize, terms: usize) -> impl Strategy<Value = SuperOp> {
    (prop::collection::vec(matrix(m, n), terms), prop::collection::vec(matrix(m, n), terms))
        .prop_map(move |(l, r)| SuperOp::new(n, m, l, r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_reconstructs(m in any_matrix(8)) {
        let sd = svd(&m).unwrap();
        let err = op_norm(&(&m - &sd.reconstruct()));
        prop_assert!(err <= 1e-9 * (1.0 + op_norm(&m)), "err {}", err);
        prop_assert!(sd.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn schmidt_coefficients_ignore_local_unitaries(
        v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
        a in square(2),
        b in square(3),
    ) {
        let v: Vec<C64> = v.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(nrm > 1e-3);
        let v: Vec<C64> = v.iter().map(|z| z / nrm).collect();
        let u = unitary_from(&a).tensor(&unitary_from(&b));
        let w = u.apply_vec(&v);
        let s1 = schmidt(&v, 2, 3).unwrap().singular_values;
        let s2 = schmidt(&w, 2, 3).unwrap().singular_values;
        for i in 0..2 {
            let x = s1.get(i).copied().unwrap_or(0.0);
            let y = s2.get(i).copied().unwrap_or(0.0);
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn inner_is_sesquilinear_and_positive(
        (x, y, z) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (matrix(r, c), matrix(r, c), matrix(r, c))),
        a in (-2.0f64..2.0, -2.0f64..2.0),
    ) {
        let a = C64::new(a.0, a.1);
        let xx = x.inner(&x).unwrap();
        prop_assert!(xx.im.abs() < 1e-12 && xx.re >= 0.0);
        prop_assert!((xx.re - x.frobenius_norm().powi(2)).abs() < 1e-10);
        let lhs = x.inner(&(&y.scale(a) + &z)).unwrap();
        let rhs = x.inner(&y).unwrap() * a + x.inner(&z).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
        let lhs = x.scale(a).inner(&y).unwrap();
        prop_assert!((lhs - a.conj() * x.inner(&y).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn operator_abs_squares_to_gram(x in (1usize..6).prop_flat_map(square)) {
        let a = operator_abs(&x).unwrap();
        prop_assert!(a.matmul(&a).max_abs_diff(&x.adjoint_matmul(&x)) < 1e-9);
    }

    #[test]
    fn schatten_norm_decreases_in_p(x in any_matrix(6)) {
        let ps = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];
        let norms: Vec<f64> = ps.iter().map(|&p| schatten_norm(&x, SchattenExponent::new(p).unwrap())).collect();
        for w in norms.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-10);
        }
    }

    #[test]
    fn schatten_norm_is_unitarily_invariant(
        (x, a, b) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (matrix(r, c), square(r), square(c))),
        p in exponent(),
    ) {
        let y = unitary_from(&a).matmul(&x).matmul(&unitary_from(&b));
        prop_assert!((schatten_norm(&y, p) - schatten_norm(&x, p)).abs() < 1e-9);
    }

    #[test]
    fn schatten_norm_is_a_norm(
        (x, y) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (matrix(r, c), matrix(r, c))),
        a in (-3.0f64..3.0, -3.0f64..3.0),
        p in exponent(),
    ) {
        let a = C64::new(a.0, a.1);
        let (nx, ny) = (schatten_norm(&x, p), schatten_norm(&y, p));
        prop_assert!(schatten_norm(&(&x + &y), p) <= nx + ny + 1e-10);
        prop_assert!((schatten_norm(&x.scale(a), p) - a.norm() * nx).abs() < 1e-10 * (1.0 + nx));
    }

    #[test]
    fn duality_witness_attains_norm(x in any_matrix(6), p in exponent()) {
        prop_assume!(x.max_abs() > 1e-6);
        let y = duality_witness(&x, p).unwrap();
        let nx = schatten_norm(&x, p);
        prop_assert!((schatten_norm(&y, p.dual()) - 1.0).abs() < 1e-8);
        prop_assert!((y.inner(&x).unwrap() - C64::new(nx, 0.0)).norm() < 1e-8 * (1.0 + nx));
    }

    #[test]
    fn block_bounds_directions(
        (x, gr, gc) in (1usize..4, 1usize..4, 1usize..4, 1usize..4)
            .prop_flat_map(|(gr, gc, br, bc)| (matrix(gr * br, gc * bc), Just(gr), Just(gc))),
        p in exponent(),
    ) {
        let (blocks, whole) = block_norm_bounds(&x, gr, gc, p).unwrap();
        if p.value() <= 2.0 {
            prop_assert!(blocks <= whole * (1.0 + 1e-10) + 1e-12);
        }
        if p.value() >= 2.0 {
            prop_assert!(whole <= blocks * (1.0 + 1e-10) + 1e-12);
        }
    }

    #[test]
    fn apply_is_linear(
        phi in superop(2, 3, 2),
        x in square(2),
        y in square(2),
        a in (-2.0f64..2.0, -2.0f64..2.0),
    ) {
        let a = C64::new(a.0, a.1);
        let lhs = phi.apply(&(&x.scale(a) + &y)).unwrap();
        let rhs = &phi.apply(&x).unwrap().scale(a) + &phi.apply(&y).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn tensor_identity_composes(phi in superop(2, 2, 2), x in square(2), z in square(6)) {
        let nested = phi.tensor_identity(2).unwrap().tensor_identity(3).unwrap();
        let flat = phi.tensor_identity(6).unwrap();
        let input = x.tensor(&z);
        prop_assert!(nested.apply(&input).unwrap().max_abs_diff(&flat.apply(&input).unwrap()) < 1e-10);
    }

    #[test]
    fn cp_forms_preserve_positivity(
        kraus in prop::collection::vec(matrix(3, 2), 1..4),
        w in square(2),
    ) {
        let phi = SuperOp::completely_positive(2, 3, kraus).unwrap();
        prop_assert!(phi.is_completely_positive(1e-9));
        let y = phi.apply(&w.adjoint_matmul(&w)).unwrap();
        prop_assert!(is_psd(&y, 1e-9 * (1.0 + op_norm(&y))));
    }

    #[test]
    fn left_and_right_maps_are_cp(phi in superop(3, 2, 3)) {
        prop_assert!(phi.phi_l().is_completely_positive(1e-9));
        prop_assert!(phi.phi_r().is_completely_positive(1e-9));
    }

    #[test]
    fn channel_json_round_trips(phi in superop(2, 3, 2)) {
        let text = serde_json::to_string(&phi).unwrap();
        let back: SuperOp = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &phi);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

fn quick_cfg(seed: u64) -> OptimizerConfig {
    OptimizerConfig { restarts: 8, ..OptimizerConfig::with_seed(seed) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn estimates_are_attained(seed in 0u64..10_000, q in exponent(), p in exponent(), herm in any::<bool>()) {
        let phi = random_superop(2, 3, 2, seed).unwrap();
        let query = NormQuery::new(q, p).hermitian(herm);
        let est = norm_q_to_p(&phi, &query, &quick_cfg(seed)).unwrap();
        prop_assert!((schatten_norm(&est.achiever, q) - 1.0).abs() < 1e-9);
        let again = evaluate_achiever(&phi, &query, &est.achiever).unwrap();
        prop_assert!(again <= est.value + 1e-8 && again >= est.value - 1e-8);
        if herm {
            prop_assert!(est.achiever.max_abs_diff(&est.achiever.adjoint()) < 1e-9);
        }
    }

    #[test]
    fn hermitian_value_never_exceeds_plain(seed in 0u64..10_000, q in exponent(), p in exponent()) {
        let phi = random_superop(2, 2, 2, seed).unwrap();
        let cfg = OptimizerConfig::with_seed(seed);
        let plain = norm_q_to_p(&phi, &NormQuery::new(q, p), &cfg).unwrap().value;
        let herm = norm_q_to_p(&phi, &NormQuery::new(q, p).hermitian(true), &cfg).unwrap().value;
        prop_assert!(herm <= plain + 1e-8, "hermitian {} plain {}", herm, plain);
    }

    #[test]
    fn ancilla_never_lowers_the_value(seed in 0u64..10_000, p in exponent()) {
        let phi = random_superop(2, 2, 2, seed).unwrap();
        let cfg = quick_cfg(seed);
        let query = NormQuery::new(SchattenExponent::ONE, p);
        let mut prev = norm_q_to_p(&phi, &query, &cfg).unwrap().value;
        for k in 2..=3 {
            let v = norm_q_to_p(&phi, &query.stabilized(k), &cfg).unwrap().value;
            prop_assert!(v >= prev - 2e-3, "k={} {} < {}", k, v, prev);
            prev = v;
        }
    }
}

#[test]
fn transpose_growth_matches_closed_form() {
    let cfg = OptimizerConfig::default();
    for n in [2usize, 3] {
        let t = transpose(n);
        for p in [1.0, 2.0] {
            let q = NormQuery::new(SchattenExponent::ONE, SchattenExponent::finite(p));
            let v = norm_q_to_p(&t, &q.stabilized(n), &cfg).unwrap().value;
            assert!((v - (n as f64).powf(2.0 / p) / n as f64).abs() < 2e-3);
        }
    }
}
