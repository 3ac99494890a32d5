//! Joint spectral measures of commuting Hermitian tuples and the Borel
//! functional calculus built on them.

mod function;

pub use function::{ScalarFunction, Sign, VectorFunction};

use crate::error::{Error, Result};
use crate::linalg::{commutator_norm, hermitian_eig, ComplexMatrix, HermitianOperator, Projection};

/// Relative commutator tolerance: `‖[A_i, A_j]‖_F <= tol * (1 + ‖A_i‖_F ‖A_j‖_F)`.
pub const COMM_TOL: f64 = 1e-9;
/// Relative eigenvalue clustering tolerance, scaled by `1 + ‖A_j‖_F`.
pub const CLUSTER_TOL: f64 = 1e-8;

/// κ pairwise commuting Hermitian operators on one space. Equality compares
/// the operators only.
#[derive(Debug, Clone)]
pub struct CommutingTuple {
    ops: Vec<HermitianOperator>,
    max_commutator_defect: f64,
}

impl PartialEq for CommutingTuple {
    fn eq(&self, other: &Self) -> bool {
        self.ops == other.ops
    }
}

/// Checks pairwise commutation and wraps the operators as a tuple.
pub fn validate_tuple(ops: Vec<HermitianOperator>, tol_comm: f64) -> Result<CommutingTuple> {
    let Some(first) = ops.first() else {
        return Err(Error::Parameter(
            "a tuple needs at least one operator".into(),
        ));
    };
    let n = first.dim();
    if let Some(bad) = ops.iter().find(|op| op.dim() != n) {
        return Err(Error::Dimension {
            expected: n,
            found: bad.dim(),
        });
    }
    let norms: Vec<f64> = ops.iter().map(HermitianOperator::frobenius_norm).collect();
    let mut max_defect: f64 = 0.0;
    for i in 0..ops.len() {
        for j in (i + 1)..ops.len() {
            let defect = commutator_norm(&ops[i], &ops[j])?;
            let tol = tol_comm * (1.0 + norms[i] * norms[j]);
            if defect > tol {
                return Err(Error::Commutation { i, j, defect, tol });
            }
            max_defect = max_defect.max(defect);
        }
    }
    Ok(CommutingTuple {
        ops,
        max_commutator_defect: max_defect,
    })
}

impl CommutingTuple {
    pub fn new(ops: Vec<HermitianOperator>) -> Result<Self> {
        validate_tuple(ops, COMM_TOL)
    }

    /// Tuple of operators built over one orthonormal eigenbasis; commutation
    /// holds by construction.
    pub(crate) fn from_shared_basis(ops: Vec<HermitianOperator>) -> Self {
        CommutingTuple {
            ops,
            max_commutator_defect: 0.0,
        }
    }

    pub fn single(op: HermitianOperator) -> Self {
        CommutingTuple {
            ops: vec![op],
            max_commutator_defect: 0.0,
        }
    }

    pub fn kappa(&self) -> usize {
        self.ops.len()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn ops(&self) -> &[HermitianOperator] {
        &self.ops
    }

    pub fn component(&self, j: usize) -> Result<&HermitianOperator> {
        self.ops.get(j).ok_or(Error::Index {
            index: j,
            len: self.ops.len(),
        })
    }

    pub fn max_commutator_defect(&self) -> f64 {
        self.max_commutator_defect
    }

    pub fn into_ops(self) -> Vec<HermitianOperator> {
        self.ops
    }

    /// Frobenius distance between corresponding components.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.kappa() != other.kappa() {
            return Err(Error::Dimension {
                expected: self.kappa(),
                found: other.kappa(),
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(a, b)| a.matrix().sub(b.matrix()).frobenius_norm())
            .fold(0.0, f64::max))
    }
}

/// One atom of a joint spectral measure: a joint eigenvalue and the
/// projection onto its joint eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: Vec<f64>,
    pub projection: Projection,
}

/// Atomic projection-valued measure on R^κ.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectralMeasure {
    kappa: usize,
    dim: usize,
    atoms: Vec<Atom>,
    cluster_tol: f64,
}

/// Simultaneous diagonalization: split the space by the eigenvalue clusters of
/// `A_1`, then split each cluster subspace by the compressed `A_2`, and so on.
/// Clusters are separated by gaps larger than `cluster_tol * (1 + ‖A_j‖_F)`;
/// atom coordinates are cluster means, with means inside that band around 0
/// set to exactly 0 and means within rounding noise of an integer set to that
/// integer.
pub fn joint_measure(t: &CommutingTuple, cluster_tol: f64) -> Result<JointSpectralMeasure> {
    let n = t.dim();
    let mut atoms = Vec::new();
    split_level(
        t,
        0,
        ComplexMatrix::identity(n),
        Vec::new(),
        cluster_tol,
        &mut atoms,
    )?;
    atoms.sort_by(|a, b| cmp_points(&a.point, &b.point));
    Ok(JointSpectralMeasure {
        kappa: t.kappa(),
        dim: n,
        atoms,
        cluster_tol,
    })
}

fn split_level(
    t: &CommutingTuple,
    level: usize,
    basis: ComplexMatrix,
    prefix: Vec<f64>,
    cluster_tol: f64,
    out: &mut Vec<Atom>,
) -> Result<()> {
    if level == t.kappa() {
        out.push(Atom {
            point: prefix,
            projection: Projection::from_orthonormal(basis),
        });
        return Ok(());
    }
    let op = &t.ops[level];
    let compressed = HermitianOperator::from_trusted(basis.adjoint_mul(&op.matrix().mul(&basis)));
    let eig = hermitian_eig(&compressed)?;
    let gap = cluster_tol * (1.0 + op.frobenius_norm());
    let mut start = 0;
    let m = eig.values.len();
    while start < m {
        let mut end = start + 1;
        while end < m && eig.values[end] - eig.values[end - 1] <= gap {
            end += 1;
        }
        let mean = eig.values[start..end].iter().sum::<f64>() / (end - start) as f64;
        let coord = snap(mean, gap, 64.0 * f64::EPSILON * (1.0 + op.frobenius_norm()));
        let idx: Vec<usize> = (start..end).collect();
        let sub = basis.mul(&eig.vectors.select_columns(&idx));
        let mut point = prefix.clone();
        point.push(coord);
        split_level(t, level + 1, sub, point, cluster_tol, out)?;
        start = end;
    }
    Ok(())
}

fn snap(x: f64, zero_band: f64, noise: f64) -> f64 {
    if x.abs() <= zero_band {
        0.0
    } else if (x - x.round()).abs() <= noise {
        x.round()
    } else {
        x
    }
}

pub(crate) fn cmp_points(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

pub(crate) fn leq_componentwise(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Interval of the real line with optional infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

impl Interval {
    pub fn real_line() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            lo_closed: false,
            hi: f64::INFINITY,
            hi_closed: false,
        }
    }

    pub fn empty() -> Self {
        Interval {
            lo: 0.0,
            lo_closed: false,
            hi: 0.0,
            hi_closed: false,
        }
    }

    /// `(-∞, x]`.
    pub fn at_most(x: f64) -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            lo_closed: false,
            hi: x,
            hi_closed: true,
        }
    }

    /// `(a, b]`.
    pub fn left_open(a: f64, b: f64) -> Self {
        Interval {
            lo: a,
            lo_closed: false,
            hi: b,
            hi_closed: true,
        }
    }

    /// `[a, b]`.
    pub fn closed(a: f64, b: f64) -> Self {
        Interval {
            lo: a,
            lo_closed: true,
            hi: b,
            hi_closed: true,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed {
            x >= self.lo
        } else {
            x > self.lo
        };
        let below = if self.hi_closed {
            x <= self.hi
        } else {
            x < self.hi
        };
        above && below
    }
}

fn in_union(sigma: &[Interval], x: f64) -> bool {
    sigma.iter().any(|iv| iv.contains(x))
}

impl JointSpectralMeasure {
    /// Assembles a measure from atoms, checking the measure axioms.
    pub fn from_atoms(
        kappa: usize,
        dim: usize,
        mut atoms: Vec<Atom>,
        cluster_tol: f64,
    ) -> Result<Self> {
        for a in &atoms {
            if a.point.len() != kappa {
                return Err(Error::Dimension {
                    expected: kappa,
                    found: a.point.len(),
                });
            }
            if a.projection.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: a.projection.dim(),
                });
            }
        }
        atoms.sort_by(|a, b| cmp_points(&a.point, &b.point));
        let m = JointSpectralMeasure {
            kappa,
            dim,
            atoms,
            cluster_tol,
        };
        let completeness = m.completeness_defect();
        if completeness > 1e-8 * dim as f64 {
            return Err(Error::Precondition(format!(
                "atoms do not sum to the identity (defect {completeness:e})"
            )));
        }
        let orth = m.orthogonality_defect();
        if orth > 1e-8 {
            return Err(Error::Precondition(format!(
                "atoms are not mutually orthogonal (defect {orth:e})"
            )));
        }
        Ok(m)
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        self.atoms.iter().map(|a| a.point.clone()).collect()
    }

    /// `‖Σ P_λ − I‖_F`.
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.atoms {
            sum = sum.add(&a.projection.matrix());
        }
        sum.sub(&ComplexMatrix::identity(self.dim)).frobenius_norm()
    }

    /// `max_{λ≠μ} ‖P_λ P_μ‖_F`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.atoms.iter().enumerate() {
            for b in &self.atoms[i + 1..] {
                let g = a.projection.basis().adjoint_mul(b.projection.basis());
                worst = worst.max(g.frobenius_norm());
            }
        }
        worst
    }

    /// `Σ_λ λ_j P_λ`.
    pub fn component(&self, j: usize) -> Result<HermitianOperator> {
        if j >= self.kappa {
            return Err(Error::Index {
                index: j,
                len: self.kappa,
            });
        }
        calculus_scalar(self, &ScalarFunction::Coordinate(j))
    }

    /// `E_{A_j}(σ) = E_A(π_j^{-1}(σ))` for a union of intervals `σ`.
    pub fn marginal(&self, j: usize, sigma: &[Interval]) -> Result<Projection> {
        if j >= self.kappa {
            return Err(Error::Index {
                index: j,
                len: self.kappa,
            });
        }
        Ok(Projection::orthogonal_sum(
            self.dim,
            self.atoms
                .iter()
                .filter(|a| in_union(sigma, a.point[j]))
                .map(|a| &a.projection),
        ))
    }

    /// `E(σ_1 × … × σ_κ)` computed directly from the atoms.
    pub fn box_projection(&self, sigmas: &[Vec<Interval>]) -> Result<Projection> {
        if sigmas.len() != self.kappa {
            return Err(Error::Dimension {
                expected: self.kappa,
                found: sigmas.len(),
            });
        }
        Ok(Projection::orthogonal_sum(
            self.dim,
            self.atoms
                .iter()
                .filter(|a| a.point.iter().zip(sigmas).all(|(&x, s)| in_union(s, x)))
                .map(|a| &a.projection),
        ))
    }

    /// `F(x) = E((-∞, x])`.
    pub fn distribution(&self, x: &[f64]) -> Projection {
        Projection::orthogonal_sum(
            self.dim,
            self.atoms
                .iter()
                .filter(|a| leq_componentwise(&a.point, x))
                .map(|a| &a.projection),
        )
    }

    /// Image measure `E ∘ φ^{-1}`; images within `cluster_tol * (1 + scale)`
    /// in ℓ∞ are merged.
    pub fn pushforward(&self, phi: &VectorFunction) -> Result<JointSpectralMeasure> {
        let images: Vec<Vec<f64>> = self
            .atoms
            .iter()
            .map(|a| phi.eval(&a.point))
            .collect::<Result<_>>()?;
        let scale = 1.0 + images.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
        let tol = self.cluster_tol * scale;
        let mut merged: Vec<(Vec<f64>, Vec<&Projection>)> = Vec::new();
        for (img, atom) in images.iter().zip(&self.atoms) {
            match merged.iter_mut().find(|(p, _)| linf(p, img) <= tol) {
                Some((_, projs)) => projs.push(&atom.projection),
                None => merged.push((img.clone(), vec![&atom.projection])),
            }
        }
        let mut atoms: Vec<Atom> = merged
            .into_iter()
            .map(|(point, projs)| Atom {
                point,
                projection: Projection::orthogonal_sum(self.dim, projs),
            })
            .collect();
        atoms.sort_by(|a, b| cmp_points(&a.point, &b.point));
        Ok(JointSpectralMeasure {
            kappa: phi.arity(),
            dim: self.dim,
            atoms,
            cluster_tol: self.cluster_tol,
        })
    }
}

pub(crate) fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// `φ(A) = Σ_λ φ(λ) P_λ`.
pub fn calculus_scalar(
    e: &JointSpectralMeasure,
    phi: &ScalarFunction,
) -> Result<HermitianOperator> {
    let n = e.dim;
    let mut m = ComplexMatrix::zeros(n, n);
    for a in &e.atoms {
        let v = phi.eval(&a.point)?;
        if v != 0.0 {
            m = m.add(&a.projection.matrix().scale(v));
        }
    }
    Ok(HermitianOperator::from_trusted(m))
}

/// `φ(A) = (φ_1(A), …, φ_ι(A))`; the result shares the eigenbasis of `e`.
pub fn calculus_vector(e: &JointSpectralMeasure, phi: &VectorFunction) -> Result<CommutingTuple> {
    if phi.arity() == 0 {
        return Err(Error::Parameter("vector function has no components".into()));
    }
    let ops = phi
        .0
        .iter()
        .map(|f| calculus_scalar(e, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(CommutingTuple::from_shared_basis(ops))
}

fn measure_of(t: &CommutingTuple) -> Result<JointSpectralMeasure> {
    joint_measure(t, CLUSTER_TOL)
}

/// `A^α = φ_α(A)` for a nonnegative integer multi-index.
pub fn monomial(t: &CommutingTuple, alpha: &[u32]) -> Result<HermitianOperator> {
    if alpha.len() != t.kappa() {
        return Err(Error::Dimension {
            expected: t.kappa(),
            found: alpha.len(),
        });
    }
    calculus_scalar(&measure_of(t)?, &ScalarFunction::Monomial(alpha.to_vec()))
}

/// `ψ_β(A)` for a nonnegative real multi-index.
pub fn fractional_power(t: &CommutingTuple, beta: &[f64]) -> Result<HermitianOperator> {
    if beta.len() != t.kappa() {
        return Err(Error::Dimension {
            expected: t.kappa(),
            found: beta.len(),
        });
    }
    if beta.iter().any(|&b| !(b >= 0.0) || !b.is_finite()) {
        return Err(Error::Parameter(format!(
            "exponents must be finite and nonnegative, got {beta:?}"
        )));
    }
    calculus_scalar(
        &measure_of(t)?,
        &ScalarFunction::FractionalPower(beta.to_vec()),
    )
}

/// `A_ε = (f_{ε_1}(A_1), …, f_{ε_κ}(A_κ))`.
pub fn parts_decompose(t: &CommutingTuple, eps: &[Sign]) -> Result<CommutingTuple> {
    if eps.len() != t.kappa() {
        return Err(Error::Dimension {
            expected: t.kappa(),
            found: eps.len(),
        });
    }
    calculus_vector(&measure_of(t)?, &VectorFunction::parts(eps))
}

/// Joint spectrum inside `[-tol, ∞)^κ`.
pub fn is_positive_tuple(t: &CommutingTuple, tol: f64) -> Result<bool> {
    Ok(measure_of(t)?
        .atoms
        .iter()
        .all(|a| a.point.iter().all(|&x| x >= -tol)))
}
