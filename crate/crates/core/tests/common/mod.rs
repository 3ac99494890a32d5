//! Oracles that recompute expected answers without going through the
//! library's spectral machinery.

#![allow(dead_code)]

use rand::Rng;
use specorder::linalg::{ComplexMatrix, C64};
use specorder::random;
use specorder::spectral::CommutingTuple;

/// Tuples over one eigenbasis, kept with their diagonals.
pub struct DiagPair {
    pub u: ComplexMatrix,
    pub da: Vec<Vec<f64>>,
    pub db: Vec<Vec<f64>>,
    pub a: CommutingTuple,
    pub b: CommutingTuple,
}

pub fn diag_pair(rng: &mut impl Rng, kappa: usize, n: usize) -> DiagPair {
    let u = random::unitary(rng, n);
    let da = random::integer_diagonals(rng, kappa, n, -2, 3);
    let db: Vec<Vec<f64>> = match rng.gen_range(0..3) {
        0 => da
            .iter()
            .map(|d| {
                d.iter()
                    .map(|&x| x + f64::from(rng.gen_range(0..=1)))
                    .collect()
            })
            .collect(),
        1 => {
            let mut db: Vec<Vec<f64>> = da.clone();
            let (j, i) = (rng.gen_range(0..kappa), rng.gen_range(0..n));
            db[j][i] -= 1.0;
            db
        }
        _ => random::integer_diagonals(rng, kappa, n, -2, 3),
    };
    let a = random::tuple_from_diagonals(&u, &da);
    let b = random::tuple_from_diagonals(&u, &db);
    DiagPair { u, da, db, a, b }
}

/// Spectral order of two tuples diagonal in the same basis: at every grid
/// point the set of basis vectors whose joint eigenvalue of `B` lies below
/// `x` must be contained in the corresponding set for `A`.
pub fn diag_order_oracle(da: &[Vec<f64>], db: &[Vec<f64>]) -> bool {
    let n = da[0].len();
    let kappa = da.len();
    let point = |d: &[Vec<f64>], i: usize| -> Vec<f64> { (0..kappa).map(|j| d[j][i]).collect() };
    let mut axes: Vec<Vec<f64>> = (0..kappa)
        .map(|j| {
            let mut v: Vec<f64> = da[j].iter().chain(&db[j]).copied().collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        })
        .collect();
    let mut grid: Vec<Vec<f64>> = vec![vec![]];
    for axis in axes.drain(..) {
        grid = grid
            .into_iter()
            .flat_map(|p| {
                axis.iter()
                    .map(|&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let below = |p: &[f64], x: &[f64]| p.iter().zip(x).all(|(a, b)| a <= b);
    grid.iter()
        .all(|x| (0..n).all(|i| !below(&point(db, i), x) || below(&point(da, i), x)))
}

/// Number of order ideals by deleting an element's up-set or down-set:
/// `count(P) = count(P ∖ ↑m) + count(P ∖ ↓m)`.
pub fn ideal_count_oracle(leq: &dyn Fn(usize, usize) -> bool, elements: &[usize]) -> u64 {
    let Some(&m) = elements.first() else { return 1 };
    let without_up: Vec<usize> = elements.iter().copied().filter(|&e| !leq(m, e)).collect();
    let without_down: Vec<usize> = elements.iter().copied().filter(|&e| !leq(e, m)).collect();
    ideal_count_oracle(leq, &without_up) + ideal_count_oracle(leq, &without_down)
}

/// Every downward-closed subset by brute force over all bitmasks.
pub fn brute_force_ideals(leq: &dyn Fn(usize, usize) -> bool, m: usize) -> Vec<u32> {
    (0u32..1 << m)
        .filter(|&mask| {
            (0..m).all(|i| mask >> i & 1 == 0 || (0..m).all(|j| !leq(j, i) || mask >> j & 1 == 1))
        })
        .collect()
}

/// Plain `x ≤_ι y` with 1-based ι.
pub fn leq_iota_oracle(x: &[f64], y: &[f64], iota: usize) -> bool {
    (0..x.len()).all(|j| if j < iota { x[j] <= y[j] } else { x[j] == y[j] })
}

/// `‖M h‖` computed with plain loops.
pub fn apply_norm(m: &ComplexMatrix, h: &[C64]) -> f64 {
    let n = m.rows();
    (0..n)
        .map(|i| (0..n).map(|k| m[(i, k)] * h[k]).sum::<C64>().norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Eigenvalues of a 2x2 real symmetric matrix `[[a, b], [b, d]]`.
pub fn sym2_eigenvalues(a: f64, b: f64, d: f64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (mean - r, mean + r)
}
