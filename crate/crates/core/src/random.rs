//! Seeded generators for random commuting tuples, ordered pairs and atomic
//! measures with exactly known joint spectra.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::{orthonormalize, ComplexMatrix, HermitianOperator, Projection, C64};
use crate::measures::{leq_iota, AtomicMeasure};
use crate::spectral::{Atom, CommutingTuple, JointSpectralMeasure, CLUSTER_TOL};

/// Random unitary from the orthonormalized columns of a uniform matrix.
pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    loop {
        let data = (0..n * n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let m = ComplexMatrix::new(n, n, data).expect("finite entries");
        let q = orthonormalize(&m, 1e-6);
        if q.rank() == n {
            return q.basis().clone();
        }
    }
}

pub fn vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// `U diag(d) U*`.
pub fn conjugated(u: &ComplexMatrix, d: &[f64]) -> HermitianOperator {
    let m = u.mul(&ComplexMatrix::from_diagonal(d)).mul(&u.adjoint());
    HermitianOperator::with_tolerance(m, 1e-9).expect("conjugated diagonal is Hermitian")
}

/// Tuple `U diag(d_j) U*` over one eigenbasis.
pub fn tuple_from_diagonals(u: &ComplexMatrix, diagonals: &[Vec<f64>]) -> CommutingTuple {
    CommutingTuple::new(diagonals.iter().map(|d| conjugated(u, d)).collect())
        .expect("shared eigenbasis")
}

/// Integer eigenvalues in `lo..=hi`; the narrow range produces repeated
/// values and hence degenerate joint eigenspaces.
pub fn integer_diagonals(
    rng: &mut impl Rng,
    kappa: usize,
    n: usize,
    lo: i32,
    hi: i32,
) -> Vec<Vec<f64>> {
    (0..kappa)
        .map(|_| (0..n).map(|_| f64::from(rng.gen_range(lo..=hi))).collect())
        .collect()
}

pub fn commuting_tuple(rng: &mut impl Rng, kappa: usize, n: usize) -> CommutingTuple {
    let u = unitary(rng, n);
    tuple_from_diagonals(&u, &integer_diagonals(rng, kappa, n, -2, 3))
}

/// Options for [`ordered_pair`].
#[derive(Debug, Clone, Copy)]
pub struct PairShape {
    pub kappa: usize,
    pub n: usize,
    /// Smallest eigenvalue allowed for `A`.
    pub lo: i32,
    pub hi: i32,
}

/// A pair with `A ⪯ B`. Most pairs share an eigenbasis with `B`'s
/// eigenvalues raised by nonnegative integers; the rest put `B` in an
/// unrelated eigenbasis with every eigenvalue above the spectrum of `A`, so
/// that the two tuples need not commute.
pub fn ordered_pair(rng: &mut impl Rng, shape: PairShape) -> (CommutingTuple, CommutingTuple) {
    let PairShape { kappa, n, lo, hi } = shape;
    let u = unitary(rng, n);
    let da = integer_diagonals(rng, kappa, n, lo, hi);
    let a = tuple_from_diagonals(&u, &da);
    let db: Vec<Vec<f64>> = if rng.gen_bool(0.75) {
        da.iter()
            .map(|d| {
                d.iter()
                    .map(|&x| x + f64::from(rng.gen_range(0..=2)))
                    .collect()
            })
            .collect()
    } else {
        let v = unitary(rng, n);
        let shifted: Vec<Vec<f64>> = da
            .iter()
            .map(|d| {
                let top = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (0..n)
                    .map(|_| top + f64::from(rng.gen_range(0..=2)))
                    .collect()
            })
            .collect();
        return (a, tuple_from_diagonals(&v, &shifted));
    };
    (a, tuple_from_diagonals(&u, &db))
}

/// A pair over one eigenbasis that is ordered, unordered by one lowered
/// eigenvalue, or unrelated, in roughly equal proportions.
pub fn mixed_pair(rng: &mut impl Rng, kappa: usize, n: usize) -> (CommutingTuple, CommutingTuple) {
    let u = unitary(rng, n);
    let da = integer_diagonals(rng, kappa, n, -2, 3);
    let mut db: Vec<Vec<f64>> = da
        .iter()
        .map(|d| {
            d.iter()
                .map(|&x| x + f64::from(rng.gen_range(0..=1)))
                .collect()
        })
        .collect();
    match rng.gen_range(0..3) {
        0 => {}
        1 => {
            let (j, i) = (rng.gen_range(0..kappa), rng.gen_range(0..n));
            db[j][i] = da[j][i] - 1.0;
        }
        _ => db = integer_diagonals(rng, kappa, n, -2, 3),
    }
    (tuple_from_diagonals(&u, &da), tuple_from_diagonals(&u, &db))
}

/// A projection-valued measure with up to `max_atoms` atoms at distinct
/// integer points, each atom carrying a group of columns of a random
/// unitary.
pub fn joint_measure(
    rng: &mut impl Rng,
    kappa: usize,
    n: usize,
    max_atoms: usize,
) -> JointSpectralMeasure {
    let u = unitary(rng, n);
    let m = rng.gen_range(1..=max_atoms.min(n).max(1));
    // every atom gets one column, the rest are spread at random
    let mut owner: Vec<usize> = (0..m).chain((m..n).map(|_| rng.gen_range(0..m))).collect();
    owner.shuffle(rng);
    let mut points: Vec<Vec<f64>> = Vec::new();
    while points.len() < m {
        let p: Vec<f64> = (0..kappa)
            .map(|_| f64::from(rng.gen_range(-3..=3)))
            .collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let atoms = points
        .into_iter()
        .enumerate()
        .map(|(k, point)| {
            let cols: Vec<usize> = (0..n).filter(|&i| owner[i] == k).collect();
            Atom {
                point,
                projection: Projection::from_orthonormal(u.select_columns(&cols)),
            }
        })
        .collect();
    JointSpectralMeasure::from_atoms(kappa, n, atoms, CLUSTER_TOL).expect("columns of a unitary")
}

/// Equal-mass pair of atomic measures on a small integer grid with integer
/// weights. Half of the pairs are built to satisfy lower-set dominance by
/// moving mass of `μ1` to `≥_ι` points.
pub fn equal_mass_pair(
    rng: &mut impl Rng,
    kappa: usize,
    iota: usize,
    max_atoms: usize,
) -> (AtomicMeasure, AtomicMeasure) {
    let point = |rng: &mut dyn rand::RngCore| -> Vec<f64> {
        (0..kappa)
            .map(|_| f64::from(rng.gen_range(0..=2)))
            .collect()
    };
    let count = rng.gen_range(1..=max_atoms.div_ceil(2).max(1));
    let atoms1: Vec<(Vec<f64>, f64)> = (0..count)
        .map(|_| (point(rng), f64::from(rng.gen_range(1..=3))))
        .collect();
    let atoms2: Vec<(Vec<f64>, f64)> = if rng.gen_bool(0.5) {
        atoms1
            .iter()
            .map(|(p, w)| {
                let mut q = p.clone();
                for x in q.iter_mut().take(iota) {
                    *x += f64::from(rng.gen_range(0..=1));
                }
                debug_assert!(leq_iota(p, &q, iota));
                (q, *w)
            })
            .collect()
    } else {
        let total: f64 = atoms1.iter().map(|a| a.1).sum();
        let mut left = total as i32;
        let mut out = Vec::new();
        while left > 0 && out.len() + 1 < max_atoms.div_ceil(2).max(1) {
            let w = rng.gen_range(1..=left);
            out.push((point(rng), f64::from(w)));
            left -= w;
        }
        if left > 0 {
            out.push((point(rng), f64::from(left)));
        }
        out
    };
    (
        AtomicMeasure::new(kappa, atoms1).expect("valid atoms"),
        AtomicMeasure::new(kappa, atoms2).expect("valid atoms"),
    )
}
