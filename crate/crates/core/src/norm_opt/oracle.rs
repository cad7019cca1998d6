//! Deterministic grid oracle for `||Phi||_{q->p}` with a two-dimensional
//! (or trivial one-dimensional) input space.
//!
//! Inputs are parameterized by angles so that every grid point is an exactly
//! normalized operator:
//!
//! * `q = 1`: `|u><v|` (or `|u><u|`) with `u`, `v` on the Bloch sphere,
//! * `q > 1`, Hermitian: `l1 |e1><e1| + l2 |e2><e2|` with `(l1, l2)` on the
//!   unit `q`-circle,
//! * `q > 1`, general: `s1 |e1><f1| + s2 e^{ic} |e2><f2|` with `s` on the
//!   non-negative quarter of the unit `q`-circle.
//!
//! A full tensor grid is evaluated when it fits the budget `8 R^2`; otherwise
//! the coarsest grid that fits is evaluated and its best points are refined
//! by a shrinking local grid. Either way every evaluated value is attained,
//! so the result is a lower bound.

use std::f64::consts::{FRAC_PI_2, PI};

use super::NormQuery;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::schatten::{schatten_norm, vector_p_norm, SchattenExponent};
use crate::superop::SuperOp;

const SEEDS: usize = 12;

/// Grid maximum of `||Phi(X)||_p / ||X||_q` at the given resolution.
pub fn brute_force_oracle(phi: &SuperOp, query: &NormQuery, resolution: usize) -> Result<f64> {
    let target = if query.stabilize_dim > 0 { phi.tensor_identity(query.stabilize_dim)? } else { phi.clone() };
    let n = target.dim_in();
    if n > 2 {
        return Err(Error::Unsupported(format!(
            "grid oracle handles input dimension <= 2, got {n}"
        )));
    }
    if resolution < 2 {
        return Err(Error::InvalidInput("oracle resolution must be at least 2".into()));
    }
    let p = query.p;
    if n == 1 {
        let y = target.apply_unchecked(&ComplexMatrix::identity(1));
        return Ok(schatten_norm(&y, p));
    }

    let q = query.q;
    let eval = |x: &ComplexMatrix| schatten_norm(&target.apply_unchecked(x), p);
    let value = match (q.is_one(), query.hermitian_restricted) {
        (true, false) => grid_maximize(&[FRAC_PI_2, 2.0 * PI, FRAC_PI_2, 2.0 * PI], resolution, |a| {
            let u = bloch(a[0], a[1]);
            let v = bloch(a[2], a[3]);
            eval(&ComplexMatrix::outer(&u, &v))
        }),
        (true, true) => grid_maximize(&[FRAC_PI_2, 2.0 * PI], resolution, |a| {
            let u = bloch(a[0], a[1]);
            eval(&ComplexMatrix::outer(&u, &u))
        }),
        (false, true) => grid_maximize(&[FRAC_PI_2, 2.0 * PI, PI], resolution, |a| {
            let (l1, l2) = circle_point(a[2], q);
            let (e1, e2) = bloch_basis(a[0], a[1]);
            let mut x = ComplexMatrix::outer(&e1, &e1).scale_real(l1);
            x.add_assign_scaled(&ComplexMatrix::outer(&e2, &e2), C64::new(l2, 0.0));
            eval(&x)
        }),
        (false, false) => grid_maximize(
            &[FRAC_PI_2, FRAC_PI_2, 2.0 * PI, FRAC_PI_2, 2.0 * PI, 2.0 * PI],
            resolution,
            |a| {
                let (s1, s2) = circle_point(a[0], q);
                let (e1, e2) = bloch_basis(a[1], a[2]);
                let (f1, f2) = bloch_basis(a[3], a[4]);
                let mut x = ComplexMatrix::outer(&e1, &f1).scale_real(s1);
                x.add_assign_scaled(&ComplexMatrix::outer(&e2, &f2), C64::from_polar(s2, a[5]));
                eval(&x)
            },
        ),
    };
    Ok(value)
}

fn bloch(a: f64, b: f64) -> [C64; 2] {
    [C64::new(a.cos(), 0.0), C64::from_polar(a.sin(), b)]
}

/// Orthonormal basis whose first vector is `bloch(a, b)`.
fn bloch_basis(a: f64, b: f64) -> ([C64; 2], [C64; 2]) {
    let e1 = bloch(a, b);
    let e2 = [-C64::from_polar(a.sin(), -b), C64::new(a.cos(), 0.0)];
    (e1, e2)
}

/// `(cos t, sin t)` rescaled to unit `q`-norm.
fn circle_point(t: f64, q: SchattenExponent) -> (f64, f64) {
    let (c, s) = (t.cos(), t.sin());
    let nrm = vector_p_norm(&[c.abs(), s.abs()], q);
    (c / nrm, s / nrm)
}

/// Maximizes `f` over the box `[0, span_i]`, see the module docs.
fn grid_maximize(spans: &[f64], resolution: usize, f: impl Fn(&[f64]) -> f64) -> f64 {
    let dim = spans.len();
    let budget = 8.0 * (resolution as f64).powi(2);
    let full = (resolution as f64).powi(dim as i32) <= budget;
    let per_axis = if full {
        resolution
    } else {
        (budget.powf(1.0 / dim as f64).floor() as usize).max(2)
    };

    // Coarse tensor grid, endpoints included.
    let mut seeds: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut idx = vec![0usize; dim];
    let mut point = vec![0.0; dim];
    let step = |k: usize| spans[k] / (per_axis - 1) as f64;
    loop {
        for k in 0..dim {
            point[k] = idx[k] as f64 * step(k);
        }
        let v = f(&point);
        if seeds.len() < SEEDS || v > seeds[SEEDS - 1].0 {
            let pos = seeds.partition_point(|s| s.0 >= v);
            seeds.insert(pos, (v, point.clone()));
            seeds.truncate(SEEDS);
        }
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == dim {
                break;
            }
        }
        if k == dim {
            break;
        }
    }

    let mut best = seeds[0].0;
    for (v0, center) in seeds {
        let hs: Vec<f64> = (0..dim).map(step).collect();
        best = best.max(refine(&f, center, v0, hs, (3usize).pow(dim as u32)));
    }
    best
}

/// Local `3^dim` grid around `center`, moving to the best neighbour or halving
/// the spacing when the center wins.
fn refine(f: &impl Fn(&[f64]) -> f64, mut center: Vec<f64>, mut value: f64, mut h: Vec<f64>, cells: usize) -> f64 {
    let dim = center.len();
    let mut trial = vec![0.0; dim];
    for _ in 0..400 {
        if h.iter().all(|&x| x < 1e-10) {
            break;
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        for cell in 0..cells {
            let mut c = cell;
            let mut is_center = true;
            for k in 0..dim {
                let off = (c % 3) as f64 - 1.0;
                c /= 3;
                if off != 0.0 {
                    is_center = false;
                }
                trial[k] = center[k] + off * h[k];
            }
            if is_center {
                continue;
            }
            let v = f(&trial);
            if v > value && best.as_ref().map_or(true, |b| v > b.0) {
                best = Some((v, trial.clone()));
            }
        }
        match best {
            Some((v, t)) => {
                value = v;
                center = t;
            }
            None => h.iter_mut().for_each(|x| *x *= 0.5),
        }
    }
    value
}
