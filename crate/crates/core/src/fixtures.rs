//! Small worked instances with known answers.

use crate::linalg::{ComplexMatrix, HermitianOperator, C64};
use crate::measures::AtomicMeasure;
use crate::spectral::CommutingTuple;

fn real(n: usize, entries: &[f64]) -> HermitianOperator {
    HermitianOperator::from_real(n, entries).expect("fixture matrices are Hermitian")
}

/// Two pairs of projections on C³ whose coordinatewise meets do not
/// commute. The first pair projects onto `span(e1, e2)` and
/// `span((1,1,0), e3)`, the second onto `span(e2, e3)` and
/// `span(e1, (0,1,1))`.
pub fn lattice_pair() -> (CommutingTuple, CommutingTuple) {
    let a = CommutingTuple::new(vec![
        HermitianOperator::diagonal(&[1., 1., 0.]),
        real(3, &[0.5, 0.5, 0., 0.5, 0.5, 0., 0., 0., 1.]),
    ])
    .expect("commuting");
    let b = CommutingTuple::new(vec![
        HermitianOperator::diagonal(&[0., 1., 1.]),
        real(3, &[1., 0., 0., 0., 0.5, 0.5, 0., 0.5, 0.5]),
    ])
    .expect("commuting");
    (a, b)
}

/// Expected meets for [`lattice_pair`]: `diag(0,1,0)` and the all-ones
/// matrix over 3.
pub fn lattice_meets() -> (ComplexMatrix, ComplexMatrix) {
    (
        ComplexMatrix::from_diagonal(&[0., 1., 0.]),
        ComplexMatrix::from_real(3, 3, &[1. / 3.; 9]).expect("3x3"),
    )
}

/// Commutator Frobenius norm of the two meets.
pub const LATTICE_DEFECT: f64 = 2.0 / 3.0;

/// `δ(0,0) + δ(1,1)` and `δ(0,1) + δ(1,0)`.
pub fn dirac_pair() -> (AtomicMeasure, AtomicMeasure) {
    let mu1 = AtomicMeasure::new(2, vec![(vec![0., 0.], 1.), (vec![1., 1.], 1.)]).expect("valid");
    let mu2 = AtomicMeasure::new(2, vec![(vec![0., 1.], 1.), (vec![1., 0.], 1.)]).expect("valid");
    (mu1, mu2)
}

/// `A = (0, [[2,1],[1,2]])` and `B_θ = (I, [[3,1],[1,1+θ]])`, ordered
/// exactly when `θ = 2`.
pub fn theta_pair(theta: f64) -> (CommutingTuple, CommutingTuple) {
    let a = CommutingTuple::new(vec![HermitianOperator::zero(2), real(2, &[2., 1., 1., 2.])])
        .expect("commuting");
    let b = CommutingTuple::new(vec![
        HermitianOperator::identity(2),
        real(2, &[3., 1., 1., 1. + theta]),
    ])
    .expect("commuting");
    (a, b)
}

/// `diag(i, 1)` and `diag(1+i, 2+i)`.
pub fn normal_pair() -> (ComplexMatrix, ComplexMatrix) {
    let diag = |a: C64, b: C64| {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = a;
        m[(1, 1)] = b;
        m
    };
    (
        diag(C64::new(0., 1.), C64::new(1., 0.)),
        diag(C64::new(1., 1.), C64::new(2., 1.)),
    )
}
