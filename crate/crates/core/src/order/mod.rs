//! Order predicates on commuting tuples: the spectral order, the Löwner
//! order and the transport of the spectral order through increasing
//! functions.

mod normal;
mod positive;

pub use normal::{normal_leq, NormalOperator, NORMAL_TOL};
pub use positive::{
    axis_lambda_sets, bounded_vector_membership, growth_ratio, multi_indices, olson_necessity_scan,
    scaled_monomial_check, BoundedVectorReport, GrowthRatioReport,
};

use crate::error::{Error, Result};
use crate::linalg::{
    commutator_norm, is_psd, proj_leq, subspace_meet, HermitianOperator, Projection, C64, PROJ_TOL,
};
use crate::measures::audit_iota_increasing;
use crate::spectral::{
    calculus_scalar, calculus_vector, joint_measure, CommutingTuple, JointSpectralMeasure,
    ScalarFunction, VectorFunction, CLUSTER_TOL,
};

/// Default tolerance for order checks.
pub const ORDER_TOL: f64 = 1e-8;

/// Location of a failed order check.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `F_B(x) ≰ F_A(x)` at this grid point.
    GridPoint(Vec<f64>),
    /// The κ=1 check on component `index` failed at `point`.
    Coordinate { index: usize, point: f64 },
    /// `A^α ≰ B^α` (possibly scaled).
    MultiIndex(Vec<u32>),
    /// A vector on which the comparison fails.
    Vector(Vec<C64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderVerdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    /// Largest defect encountered; the failing one when `holds` is false.
    pub defect: f64,
}

impl OrderVerdict {
    pub(crate) fn pass(defect: f64) -> Self {
        OrderVerdict {
            holds: true,
            witness: None,
            defect,
        }
    }

    pub(crate) fn fail(witness: Witness, defect: f64) -> Self {
        OrderVerdict {
            holds: false,
            witness: Some(witness),
            defect,
        }
    }
}

fn check_pair(a: &CommutingTuple, b: &CommutingTuple) -> Result<()> {
    if a.kappa() != b.kappa() {
        return Err(Error::Dimension {
            expected: a.kappa(),
            found: b.kappa(),
        });
    }
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Per-axis clusters of the atom coordinates of two measures. Coordinates
/// that agree up to the clustering tolerance share one grid value.
struct SharedGrid {
    axes: Vec<Vec<(f64, f64)>>,
}

impl SharedGrid {
    fn new(ea: &JointSpectralMeasure, eb: &JointSpectralMeasure) -> Self {
        let axes = (0..ea.kappa())
            .map(|j| {
                let mut vals: Vec<f64> = ea
                    .atoms()
                    .iter()
                    .chain(eb.atoms())
                    .map(|a| a.point[j])
                    .collect();
                vals.sort_by(f64::total_cmp);
                let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
                let gap = ea.cluster_tol().max(eb.cluster_tol()) * (1.0 + scale);
                let mut clusters: Vec<(f64, f64)> = Vec::new();
                for v in vals {
                    match clusters.last_mut() {
                        Some((_, hi)) if v - *hi <= gap => *hi = v,
                        _ => clusters.push((v, v)),
                    }
                }
                clusters
            })
            .collect();
        SharedGrid { axes }
    }

    fn index(&self, point: &[f64]) -> Vec<usize> {
        point
            .iter()
            .zip(&self.axes)
            .map(|(&v, axis)| {
                axis.iter()
                    .position(|&(lo, hi)| lo <= v && v <= hi)
                    .unwrap_or(axis.len())
            })
            .collect()
    }

    fn coords(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .zip(&self.axes)
            .map(|(&i, axis)| axis[i].0)
            .collect()
    }

    /// All index vectors in lexicographic order.
    fn points(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for axis in &self.axes {
            out = out
                .into_iter()
                .flat_map(|p: Vec<usize>| {
                    (0..axis.len()).map(move |i| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

fn below(idx: &[usize], x: &[usize]) -> bool {
    idx.iter().zip(x).all(|(a, b)| a <= b)
}

/// Spectral order of two measures on a common space.
pub fn spectral_leq_measures(
    ea: &JointSpectralMeasure,
    eb: &JointSpectralMeasure,
    tol: f64,
) -> Result<OrderVerdict> {
    if ea.kappa() != eb.kappa() || ea.dim() != eb.dim() {
        return Err(Error::Dimension {
            expected: ea.kappa() * ea.dim(),
            found: eb.kappa() * eb.dim(),
        });
    }
    let grid = SharedGrid::new(ea, eb);
    let ia: Vec<Vec<usize>> = ea.atoms().iter().map(|a| grid.index(&a.point)).collect();
    let ib: Vec<Vec<usize>> = eb.atoms().iter().map(|a| grid.index(&a.point)).collect();
    // overlap[l][m] = ‖V_l^* W_m‖_F², the part of atom m of B inside atom l of A
    let overlap: Vec<Vec<f64>> = ea
        .atoms()
        .iter()
        .map(|la| {
            eb.atoms()
                .iter()
                .map(|mb| {
                    la.projection
                        .basis()
                        .adjoint_mul(mb.projection.basis())
                        .frobenius_norm()
                        .powi(2)
                })
                .collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    for x in grid.points() {
        let mut leak = 0.0;
        let mut rank = 0;
        for (m, mi) in ib.iter().enumerate() {
            if !below(mi, &x) {
                continue;
            }
            rank += eb.atoms()[m].projection.rank();
            for (l, li) in ia.iter().enumerate() {
                if !below(li, &x) {
                    leak += overlap[l][m];
                }
            }
        }
        let defect = leak.sqrt();
        if defect > tol * (rank.max(1) as f64) {
            return Ok(OrderVerdict::fail(
                Witness::GridPoint(grid.coords(&x)),
                defect,
            ));
        }
        worst = worst.max(defect);
    }
    Ok(OrderVerdict::pass(worst))
}

/// `A ⪯ B`: `F_B(x) ≤ F_A(x)` on the merged atom grid, which is exact
/// because both distribution functions are constant between grid values.
pub fn spectral_leq(a: &CommutingTuple, b: &CommutingTuple, tol: f64) -> Result<OrderVerdict> {
    check_pair(a, b)?;
    spectral_leq_measures(
        &joint_measure(a, CLUSTER_TOL)?,
        &joint_measure(b, CLUSTER_TOL)?,
        tol,
    )
}

/// The same order computed naively: distribution projections on the exact
/// union of raw atom coordinates, compared with [`proj_leq`].
pub fn spectral_leq_by_distribution(
    a: &CommutingTuple,
    b: &CommutingTuple,
    tol: f64,
) -> Result<OrderVerdict> {
    check_pair(a, b)?;
    let ea = joint_measure(a, CLUSTER_TOL)?;
    let eb = joint_measure(b, CLUSTER_TOL)?;
    let axes = crate::measures::axis_values(
        ea.atoms().iter().chain(eb.atoms()).map(|x| &x.point),
        a.kappa(),
    );
    for x in crate::measures::product_grid(&axes) {
        let (fa, fb) = (ea.distribution(&x), eb.distribution(&x));
        if !proj_leq(&fb, &fa, tol)? {
            let defect = crate::linalg::containment_defect(&fb, &fa)?;
            return Ok(OrderVerdict::fail(Witness::GridPoint(x), defect));
        }
    }
    Ok(OrderVerdict::pass(0.0))
}

/// Runs the κ=1 order on each component.
pub fn spectral_leq_componentwise(
    a: &CommutingTuple,
    b: &CommutingTuple,
    tol: f64,
) -> Result<OrderVerdict> {
    check_pair(a, b)?;
    let mut worst: f64 = 0.0;
    for (j, (aj, bj)) in a.ops().iter().zip(b.ops()).enumerate() {
        let v = spectral_leq(
            &CommutingTuple::single(aj.clone()),
            &CommutingTuple::single(bj.clone()),
            tol,
        )?;
        if !v.holds {
            let point = match v.witness {
                Some(Witness::GridPoint(x)) => x[0],
                _ => f64::NAN,
            };
            return Ok(OrderVerdict::fail(
                Witness::Coordinate { index: j, point },
                v.defect,
            ));
        }
        worst = worst.max(v.defect);
    }
    Ok(OrderVerdict::pass(worst))
}

/// `A ≤ B` in the Löwner order: `B − A` positive semidefinite.
pub fn loewner_leq(a: &HermitianOperator, b: &HermitianOperator, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    is_psd(&b.sub(a), tol)
}

fn union_points(ea: &JointSpectralMeasure, eb: &JointSpectralMeasure) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = ea.points();
    for p in eb.points() {
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

fn audit_on(f: &ScalarFunction, points: &[Vec<f64>], iota: usize) -> Result<()> {
    let audit = audit_iota_increasing(|x| f.eval(x), points, iota)?;
    match audit.counterexample {
        Some((lower, upper)) => Err(Error::Monotonicity { iota, lower, upper }),
        None => Ok(()),
    }
}

/// For `A ⪯ B` and an increasing `φ`, checks `φ(A) ⪯ φ(B)`. A failing
/// verdict would contradict the transport property and indicates a
/// numerical problem.
pub fn monotone_transport_check(
    a: &CommutingTuple,
    b: &CommutingTuple,
    phi: &VectorFunction,
    tol: f64,
) -> Result<OrderVerdict> {
    check_pair(a, b)?;
    let ea = joint_measure(a, CLUSTER_TOL)?;
    let eb = joint_measure(b, CLUSTER_TOL)?;
    if !spectral_leq_measures(&ea, &eb, tol)?.holds {
        return Err(Error::Precondition(
            "the input tuples are not in spectral order".into(),
        ));
    }
    let points = union_points(&ea, &eb);
    for f in &phi.0 {
        audit_on(f, &points, a.kappa())?;
    }
    spectral_leq(
        &calculus_vector(&ea, phi)?,
        &calculus_vector(&eb, phi)?,
        tol,
    )
}

/// Transport through a function that is only ι-increasing on `R^ι × Ω`,
/// for tuples whose trailing components coincide and are spectrally
/// supported in `Ω`. Checks `φ(A) ⪯ φ(B)` in the κ=1 order.
pub fn restricted_monotone_check(
    a: &CommutingTuple,
    b: &CommutingTuple,
    phi: &ScalarFunction,
    iota: usize,
    omega: &dyn Fn(&[f64]) -> bool,
    tol: f64,
) -> Result<OrderVerdict> {
    check_pair(a, b)?;
    let kappa = a.kappa();
    if iota == 0 || iota > kappa {
        return Err(Error::Parameter(format!(
            "iota must lie in 1..={kappa}, got {iota}"
        )));
    }
    for j in iota..kappa {
        let (aj, bj) = (&a.ops()[j], &b.ops()[j]);
        let diff = aj.sub(bj).frobenius_norm();
        if diff > tol * (1.0 + aj.frobenius_norm()) {
            return Err(Error::Precondition(format!(
                "trailing components differ: ‖A_{0} − B_{0}‖ = {diff:e}",
                j + 1
            )));
        }
    }
    let ea = joint_measure(a, CLUSTER_TOL)?;
    let eb = joint_measure(b, CLUSTER_TOL)?;
    for atom in ea.atoms().iter().chain(eb.atoms()) {
        if !omega(&atom.point[iota..]) {
            return Err(Error::Precondition(format!(
                "trailing spectrum leaves the admissible set at {:?}",
                atom.point
            )));
        }
    }
    if !spectral_leq_measures(&ea, &eb, tol)?.holds {
        return Err(Error::Precondition(
            "the input tuples are not in spectral order".into(),
        ));
    }
    audit_on(phi, &union_points(&ea, &eb), iota)?;
    let fa = calculus_scalar(&ea, phi)?;
    let fb = calculus_scalar(&eb, phi)?;
    spectral_leq(
        &CommutingTuple::single(fa),
        &CommutingTuple::single(fb),
        tol,
    )
}

/// Candidate infimum of two projection tuples built from coordinatewise
/// meets.
#[derive(Debug, Clone, PartialEq)]
pub struct InfimumReport {
    pub candidate: Vec<Projection>,
    /// Largest pairwise commutator Frobenius norm among the candidate's
    /// components.
    pub commutator_defect: f64,
    pub commuting: bool,
}

impl InfimumReport {
    /// The candidate as a tuple, when its components commute.
    pub fn tuple(&self) -> Option<CommutingTuple> {
        self.commuting
            .then(|| {
                CommutingTuple::new(self.candidate.iter().map(Projection::to_operator).collect())
                    .ok()
            })
            .flatten()
    }
}

fn as_projections(t: &CommutingTuple, offset: usize) -> Result<Vec<Projection>> {
    t.ops()
        .iter()
        .enumerate()
        .map(|(j, op)| {
            Projection::from_operator(op, PROJ_TOL)?
                .ok_or(Error::NotProjection { index: offset + j })
        })
        .collect()
}

/// Meets each coordinate pair of projections and measures how far the
/// resulting components are from commuting. Component indices in
/// [`Error::NotProjection`] count `a` first, then `b`.
pub fn infimum_probe(a: &CommutingTuple, b: &CommutingTuple) -> Result<InfimumReport> {
    check_pair(a, b)?;
    let pa = as_projections(a, 0)?;
    let pb = as_projections(b, a.kappa())?;
    let candidate: Vec<Projection> = pa
        .iter()
        .zip(&pb)
        .map(|(p, q)| subspace_meet(p, q, 1e-9))
        .collect::<Result<_>>()?;
    let ops: Vec<HermitianOperator> = candidate.iter().map(Projection::to_operator).collect();
    let mut defect: f64 = 0.0;
    for i in 0..ops.len() {
        for j in (i + 1)..ops.len() {
            defect = defect.max(commutator_norm(&ops[i], &ops[j])?);
        }
    }
    Ok(InfimumReport {
        candidate,
        commutator_defect: defect,
        commuting: defect <= 1e-9,
    })
}
