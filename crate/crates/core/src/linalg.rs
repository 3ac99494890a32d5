//! Dense complex linear algebra: Hermitian eigensolver, orthonormal range
//! bases, the projection lattice and positive-semidefiniteness tests.

use num_complex::Complex64;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Relative Hermiticity tolerance: `|M - M*|_max <= HERM_TOL * (1 + |M|_max)`.
pub const HERM_TOL: f64 = 1e-10;
/// Column orthonormality tolerance for range bases.
pub const ORTH_TOL: f64 = 1e-10;
/// Default tolerance for projection comparisons.
pub const PROJ_TOL: f64 = 1e-8;
/// Relative rank cutoff used by [`orthonormalize`].
pub const RANK_TOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_THRESHOLD: f64 = 1e-12;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Dimension {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, &z) in col.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    /// Matrix product. Panics if the inner dimensions disagree.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self* · other` without materializing the adjoint.
    pub fn adjoint_mul(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row counts must agree");
        let mut out = Self::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            for i in 0..self.cols {
                let a = self[(k, i)].conj();
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shapes must agree"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row counts must agree");
        let cols = self.cols + other.cols;
        let mut m = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, jj)] = self[(i, j)];
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Square complex matrix equal to its adjoint, stored symmetrized. The
/// recorded input defect does not take part in equality.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    hermiticity_defect: f64,
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl HermitianOperator {
    /// Validates with the default tolerance `HERM_TOL * (1 + |M|_max)` and
    /// stores `(M + M*) / 2`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, HERM_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, rel_tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows,
                cols: matrix.cols,
            });
        }
        let n = matrix.rows;
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                defect = defect.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        let tol = rel_tol * (1.0 + matrix.max_abs());
        if defect > tol {
            return Err(Error::NotHermitian { defect, tol });
        }
        Ok(Self {
            matrix: symmetrize(&matrix),
            hermiticity_defect: defect,
        })
    }

    /// Wraps a matrix known to be Hermitian up to rounding (it is symmetrized).
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: symmetrize(&matrix),
            hermiticity_defect: 0.0,
        }
    }

    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real(n, n, entries)?)
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Self::from_trusted(ComplexMatrix::from_diagonal(diag))
    }

    pub fn scalar(n: usize, c: f64) -> Self {
        Self::from_trusted(ComplexMatrix::identity(n).scale(c))
    }

    pub fn zero(n: usize) -> Self {
        Self::scalar(n, 0.0)
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_trusted(self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_trusted(self.matrix.sub(&other.matrix))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_trusted(self.matrix.scale(s))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    /// Operator (spectral) norm, computed from the eigenvalues.
    pub fn spectral_norm(&self) -> Result<f64> {
        Ok(hermitian_eig(self)?
            .values
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max))
    }

    /// ⟨h, A h⟩ (real for Hermitian A).
    pub fn quadratic_form(&self, h: &[C64]) -> f64 {
        let ah = self.matrix.apply(h);
        h.iter().zip(&ah).map(|(x, y)| (x.conj() * y).re).sum()
    }
}

fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
    }
    out
}

/// Eigenvalues in ascending order, with eigenvectors as orthonormal columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// a real plane rotation. Sweeps stop when the off-diagonal Frobenius norm is
/// below `1e-12 * |A|_F`. Each eigenvector is normalized so that its first
/// non-negligible entry is real and positive.
pub fn hermitian_eig(op: &HermitianOperator) -> Result<Eigen> {
    let n = op.dim();
    let mut a = op.matrix.clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_REL_THRESHOLD * a.frobenius_norm();

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = n <= 1;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let phase = apq / g;
                let theta = 0.5 * (2.0 * g).atan2(a[(q, q)].re - a[(p, p)].re);
                let (s, c) = theta.sin_cos();
                // J = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let j00 = C64::new(c, 0.0);
                let j01 = C64::new(s, 0.0);
                let j10 = -phase.conj() * s;
                let j11 = phase.conj() * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * j00 + akq * j10;
                    a[(k, q)] = akp * j01 + akq * j11;
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * j00 + vkq * j10;
                    v[(k, q)] = vkp * j01 + vkq * j11;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = j00.conj() * apk + j10.conj() * aqk;
                    a[(q, k)] = j01.conj() * apk + j11.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    if !converged {
        let residual = off_norm(&a);
        if residual > threshold {
            return Err(Error::NonConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
                residual,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = v.select_columns(&order);
    for j in 0..n {
        normalize_phase(&mut vectors, j);
    }
    Ok(Eigen { values, vectors })
}

fn normalize_phase(m: &mut ComplexMatrix, j: usize) {
    let lead = (0..m.rows).map(|i| m[(i, j)]).find(|z| z.norm() > 1e-12);
    if let Some(z) = lead {
        let rot = z.conj() / z.norm();
        for i in 0..m.rows {
            m[(i, j)] *= rot;
        }
    }
}

/// Orthogonal projection stored as an orthonormal basis of its range.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    basis: ComplexMatrix,
}

impl Projection {
    pub fn zero(n: usize) -> Self {
        Self {
            basis: ComplexMatrix::zeros(n, 0),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            basis: ComplexMatrix::identity(n),
        }
    }

    /// Wraps columns that are already orthonormal.
    pub(crate) fn from_orthonormal(basis: ComplexMatrix) -> Self {
        Self { basis }
    }

    /// Projection onto the span of the given vectors.
    pub fn span(n: usize, vectors: &[Vec<C64>]) -> Result<Self> {
        Ok(orthonormalize(
            &ComplexMatrix::from_columns(n, vectors)?,
            RANK_TOL,
        ))
    }

    /// Recognizes a Hermitian matrix whose eigenvalues all lie within `tol` of
    /// 0 or 1, returning the projection onto the eigenvalue-1 eigenspace.
    pub fn from_operator(op: &HermitianOperator, tol: f64) -> Result<Option<Self>> {
        let eig = hermitian_eig(op)?;
        if eig
            .values
            .iter()
            .any(|&l| l.abs() > tol && (l - 1.0).abs() > tol)
        {
            return Ok(None);
        }
        let idx: Vec<usize> = (0..op.dim()).filter(|&i| eig.values[i] > 0.5).collect();
        Ok(Some(Self {
            basis: eig.vectors.select_columns(&idx),
        }))
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn rank(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// The idempotent `V V*`.
    pub fn matrix(&self) -> ComplexMatrix {
        self.basis.mul(&self.basis.adjoint())
    }

    pub fn to_operator(&self) -> HermitianOperator {
        HermitianOperator::from_trusted(self.matrix())
    }

    /// Concatenates range bases of mutually orthogonal projections.
    pub(crate) fn orthogonal_sum<'a>(
        n: usize,
        parts: impl IntoIterator<Item = &'a Projection>,
    ) -> Self {
        let mut basis = ComplexMatrix::zeros(n, 0);
        for p in parts {
            basis = basis.hstack(&p.basis);
        }
        Self { basis }
    }

    /// `P h`.
    pub fn apply(&self, h: &[C64]) -> Vec<C64> {
        let coeffs = self.basis.adjoint().apply(h);
        self.basis.apply(&coeffs)
    }

    /// `‖P h‖²`.
    pub fn weight(&self, h: &[C64]) -> f64 {
        self.basis
            .adjoint()
            .apply(h)
            .iter()
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Projection onto the orthogonal complement of the range.
    pub fn complement(&self) -> Result<Self> {
        let n = self.dim();
        if self.rank() == 0 {
            return Ok(Self::identity(n));
        }
        let eig = hermitian_eig(&self.to_operator())?;
        let idx: Vec<usize> = (0..n).filter(|&i| eig.values[i] < 0.5).collect();
        Ok(Self {
            basis: eig.vectors.select_columns(&idx),
        })
    }

    /// Orthonormality defect `‖V*V - I‖_F`.
    pub fn orthonormality_defect(&self) -> f64 {
        self.basis
            .adjoint_mul(&self.basis)
            .sub(&ComplexMatrix::identity(self.rank()))
            .frobenius_norm()
    }
}

/// Modified Gram-Schmidt (two passes) over the columns. Columns whose
/// residual norm is at most `rel_tol * max column norm` are dropped.
pub fn orthonormalize(columns: &ComplexMatrix, rel_tol: f64) -> Projection {
    let n = columns.rows();
    let max_norm = (0..columns.cols())
        .map(|j| {
            columns
                .column(j)
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    if max_norm == 0.0 {
        return Projection::zero(n);
    }
    let cutoff = rel_tol * max_norm;
    let mut kept: Vec<Vec<C64>> = Vec::new();
    for j in 0..columns.cols() {
        let mut w = columns.column(j);
        for _ in 0..2 {
            for q in &kept {
                let c: C64 = q.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > cutoff {
            kept.push(w.into_iter().map(|z| z / norm).collect());
        }
    }
    Projection {
        basis: ComplexMatrix::from_columns(n, &kept).expect("columns have matching length"),
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

/// `‖(I - Q) V_P‖_F`: how far the range of `p` sticks out of the range of `q`.
pub fn containment_defect(p: &Projection, q: &Projection) -> Result<f64> {
    check_dims(p.dim(), q.dim())?;
    let coeffs = q.basis.adjoint_mul(&p.basis);
    Ok(p.basis.sub(&q.basis.mul(&coeffs)).frobenius_norm())
}

/// Projection order: `P <= Q` iff `ran P ⊆ ran Q`, tested as
/// `‖(I - Q) V_P‖_F <= tol * max(1, rank P)`.
pub fn proj_leq(p: &Projection, q: &Projection, tol: f64) -> Result<bool> {
    Ok(containment_defect(p, q)? <= tol * (p.rank().max(1) as f64))
}

/// Projection onto the span of both ranges.
pub fn subspace_join(p: &Projection, q: &Projection) -> Result<Projection> {
    check_dims(p.dim(), q.dim())?;
    Ok(orthonormalize(&p.basis.hstack(&q.basis), RANK_TOL))
}

/// Projection onto the intersection of both ranges: the eigenspace of `P + Q`
/// for eigenvalues within `tol` of 2.
pub fn subspace_meet(p: &Projection, q: &Projection, tol: f64) -> Result<Projection> {
    check_dims(p.dim(), q.dim())?;
    let n = p.dim();
    if p.rank() == 0 || q.rank() == 0 {
        return Ok(Projection::zero(n));
    }
    let sum = HermitianOperator::from_trusted(p.matrix().add(&q.matrix()));
    let eig = hermitian_eig(&sum)?;
    let idx: Vec<usize> = (0..n).filter(|&i| eig.values[i] >= 2.0 - tol).collect();
    Ok(Projection {
        basis: eig.vectors.select_columns(&idx),
    })
}

/// Positive semidefiniteness: `λ_min >= -tol * (1 + ‖op‖)`.
pub fn is_psd(op: &HermitianOperator, tol: f64) -> Result<bool> {
    Ok(psd_margin(op)? >= -tol)
}

/// `λ_min / (1 + ‖op‖)`, the scaled smallest eigenvalue.
pub fn psd_margin(op: &HermitianOperator) -> Result<f64> {
    let eig = hermitian_eig(op)?;
    let norm = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let min = eig.values.first().copied().unwrap_or(0.0);
    Ok(min / (1.0 + norm))
}

/// Frobenius norm of `ab - ba`.
pub fn commutator_norm(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let ab = a.matrix.mul(&b.matrix);
    let ba = b.matrix.mul(&a.matrix);
    Ok(ab.sub(&ba).frobenius_norm())
}
