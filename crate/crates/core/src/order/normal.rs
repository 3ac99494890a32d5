//! Normal matrices as commuting pairs of Hermitian matrices.

use super::{spectral_leq, OrderVerdict};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator, C64};
use crate::spectral::CommutingTuple;

/// Relative normality tolerance, scaled by `1 + ‖T‖_F²`.
pub const NORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct NormalOperator {
    matrix: ComplexMatrix,
    normality_defect: f64,
}

impl NormalOperator {
    /// Accepts `T` when `‖TT* − T*T‖_F ≤ tol (1 + ‖T‖_F²)`.
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let adj = matrix.adjoint();
        let defect = matrix.mul(&adj).sub(&adj.mul(&matrix)).frobenius_norm();
        let bound = tol * (1.0 + matrix.frobenius_norm().powi(2));
        if defect > bound {
            return Err(Error::Normality { defect, tol: bound });
        }
        Ok(NormalOperator {
            matrix,
            normality_defect: defect,
        })
    }

    /// `T = A_1 + i A_2` for a commuting pair.
    pub fn from_tuple(t: &CommutingTuple) -> Result<Self> {
        if t.kappa() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: t.kappa(),
            });
        }
        let re = t.ops()[0].matrix();
        let im = t.ops()[1].matrix().scale_complex(C64::new(0.0, 1.0));
        NormalOperator::new(re.add(&im), NORMAL_TOL)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn normality_defect(&self) -> f64 {
        self.normality_defect
    }

    /// `(T + T*) / 2`.
    pub fn re(&self) -> HermitianOperator {
        HermitianOperator::from_trusted(self.matrix.add(&self.matrix.adjoint()).scale(0.5))
    }

    /// `(T − T*) / 2i`.
    pub fn im(&self) -> HermitianOperator {
        let diff = self.matrix.sub(&self.matrix.adjoint());
        HermitianOperator::from_trusted(diff.scale_complex(C64::new(0.0, -0.5)))
    }

    /// The commuting pair `(Re T, Im T)`.
    pub fn to_tuple(&self) -> Result<CommutingTuple> {
        CommutingTuple::new(vec![self.re(), self.im()])
    }
}

/// Spectral order of normal matrices through their real and imaginary parts.
pub fn normal_leq(s: &NormalOperator, t: &NormalOperator, tol: f64) -> Result<OrderVerdict> {
    spectral_leq(&s.to_tuple()?, &t.to_tuple()?, tol)
}
