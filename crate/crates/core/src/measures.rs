//! Finite atomic measures on R^κ, ι-lower sets and the lower-set dominance
//! order between measures.

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::spectral::{
    cmp_points, joint_measure, linf, CommutingTuple, ScalarFunction, CLUSTER_TOL,
};

/// Points closer than this in ℓ∞ are treated as one atom.
pub const MERGE_TOL: f64 = 1e-9;
/// Largest atom count accepted by the ideal enumeration by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;
/// Mollifier steepnesses used for the continuous test functions.
pub const MOLLIFIER_STEEPNESS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// Finite measure `Σ w_i δ_{p_i}` on R^κ.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    kappa: usize,
    atoms: Vec<(Vec<f64>, f64)>,
}

impl AtomicMeasure {
    /// Validates weights and merges atoms within [`MERGE_TOL`]. Atoms come
    /// out sorted lexicographically.
    pub fn new(kappa: usize, atoms: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        let mut merged: Vec<(Vec<f64>, f64)> = Vec::with_capacity(atoms.len());
        for (index, (point, weight)) in atoms.into_iter().enumerate() {
            if point.len() != kappa {
                return Err(Error::Dimension {
                    expected: kappa,
                    found: point.len(),
                });
            }
            if !weight.is_finite() || weight < 0.0 || point.iter().any(|x| !x.is_finite()) {
                return Err(Error::Parameter(format!(
                    "atom {index} needs a finite point and a finite nonnegative weight"
                )));
            }
            match merged
                .iter_mut()
                .find(|(p, _)| linf(p, &point) <= MERGE_TOL)
            {
                Some((_, w)) => *w += weight,
                None => merged.push((point, weight)),
            }
        }
        merged.sort_by(|a, b| cmp_points(&a.0, &b.0));
        Ok(AtomicMeasure {
            kappa,
            atoms: merged,
        })
    }

    pub fn zero(kappa: usize) -> Self {
        AtomicMeasure {
            kappa,
            atoms: Vec::new(),
        }
    }

    pub fn dirac(point: Vec<f64>) -> Result<Self> {
        AtomicMeasure::new(point.len(), vec![(point, 1.0)])
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn atoms(&self) -> &[(Vec<f64>, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        AtomicMeasure::new(
            self.kappa,
            self.atoms.iter().map(|(p, w)| (p.clone(), w * s)).collect(),
        )
    }

    /// Sum of two measures.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.kappa != other.kappa {
            return Err(Error::Dimension {
                expected: self.kappa,
                found: other.kappa,
            });
        }
        AtomicMeasure::new(
            self.kappa,
            self.atoms.iter().chain(&other.atoms).cloned().collect(),
        )
    }

    pub fn mass_where(&self, pred: impl Fn(&[f64]) -> bool) -> f64 {
        self.atoms
            .iter()
            .filter(|(p, _)| pred(p))
            .map(|(_, w)| w)
            .sum()
    }

    /// `μ((-∞, x])`.
    pub fn cdf(&self, x: &[f64]) -> f64 {
        self.mass_where(|p| p.iter().zip(x).all(|(a, b)| a <= b))
    }

    pub fn integral(&self, f: impl Fn(&[f64]) -> Result<f64>) -> Result<f64> {
        self.atoms
            .iter()
            .try_fold(0.0, |acc, (p, w)| Ok(acc + w * f(p)?))
    }
}

/// `x ≤_ι y`: componentwise `≤` on the first ι coordinates, exact equality
/// on the rest. `iota` is 1-based and clamped to the point length.
pub fn leq_iota(x: &[f64], y: &[f64], iota: usize) -> bool {
    let iota = iota.min(x.len());
    x[..iota].iter().zip(&y[..iota]).all(|(a, b)| a <= b) && x[iota..] == y[iota..]
}

fn check_iota(iota: usize, kappa: usize) -> Result<()> {
    if iota == 0 || iota > kappa {
        Err(Error::Parameter(format!(
            "iota must lie in 1..={kappa}, got {iota}"
        )))
    } else {
        Ok(())
    }
}

/// Lower set `↓_ι Ω` generated by a finite point set.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerSetGen {
    iota: usize,
    kappa: usize,
    generators: Vec<Vec<f64>>,
}

impl LowerSetGen {
    pub fn new(kappa: usize, iota: usize, generators: Vec<Vec<f64>>) -> Result<Self> {
        check_iota(iota, kappa)?;
        if let Some(bad) = generators.iter().find(|g| g.len() != kappa) {
            return Err(Error::Dimension {
                expected: kappa,
                found: bad.len(),
            });
        }
        Ok(LowerSetGen {
            iota,
            kappa,
            generators,
        })
    }

    pub fn iota(&self) -> usize {
        self.iota
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.generators.iter().any(|y| leq_iota(x, y, self.iota))
    }

    /// ℓ¹ distance from `x` to the lower set.
    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        if self.generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if x.len() != self.kappa {
            return Err(Error::Dimension {
                expected: self.kappa,
                found: x.len(),
            });
        }
        Ok(self
            .generators
            .iter()
            .map(|y| {
                let head: f64 = x[..self.iota]
                    .iter()
                    .zip(&y[..self.iota])
                    .map(|(a, b)| (a - b).max(0.0))
                    .sum();
                let tail: f64 = x[self.iota..]
                    .iter()
                    .zip(&y[self.iota..])
                    .map(|(a, b)| (a - b).abs())
                    .sum();
                head + tail
            })
            .fold(f64::INFINITY, f64::min))
    }

    /// `{x : d(x) ≤ eps}`.
    pub fn epsilon_fatten(&self, eps: f64) -> Result<FattenedLowerSet> {
        if !(eps > 0.0) {
            return Err(Error::Parameter(format!(
                "fattening radius must be positive, got {eps}"
            )));
        }
        if self.generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        Ok(FattenedLowerSet {
            base: self.clone(),
            eps,
        })
    }
}

/// `x ∈ ↓_ι Ω`.
pub fn lower_membership(s: &LowerSetGen, x: &[f64]) -> bool {
    s.contains(x)
}

/// ℓ¹ distance from `x` to `↓_ι Ω`.
pub fn lower_distance(s: &LowerSetGen, x: &[f64]) -> Result<f64> {
    s.distance(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FattenedLowerSet {
    base: LowerSetGen,
    eps: f64,
}

impl FattenedLowerSet {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.base.distance(x).is_ok_and(|d| d <= self.eps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityAudit {
    pub holds: bool,
    /// First pair `(x, y)` with `x ≤_ι y` and `f(x) > f(y)`.
    pub counterexample: Option<(Vec<f64>, Vec<f64>)>,
    /// Whether every sublevel set `{f ≤ f(p)}` is downward closed on the
    /// sample; must equal `holds`.
    pub sublevel_sets_closed: bool,
}

/// Checks `x ≤_ι y ⟹ f(x) ≤ f(y)` on every comparable pair of `points`.
pub fn audit_iota_increasing(
    f: impl Fn(&[f64]) -> Result<f64>,
    points: &[Vec<f64>],
    iota: usize,
) -> Result<MonotonicityAudit> {
    let values: Vec<f64> = points.iter().map(|p| f(p)).collect::<Result<_>>()?;
    let mut counterexample = None;
    'outer: for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate() {
            if i != j && leq_iota(x, y, iota) && values[i] > values[j] {
                counterexample = Some((x.clone(), y.clone()));
                break 'outer;
            }
        }
    }
    let mut sublevel_sets_closed = true;
    for &level in &values {
        let inside: Vec<bool> = values.iter().map(|&v| v <= level).collect();
        let closed = points.iter().enumerate().all(|(j, y)| {
            !inside[j]
                || points
                    .iter()
                    .enumerate()
                    .all(|(i, x)| inside[i] || !leq_iota(x, y, iota))
        });
        if !closed {
            sublevel_sets_closed = false;
            break;
        }
    }
    Ok(MonotonicityAudit {
        holds: counterexample.is_none(),
        counterexample,
        sublevel_sets_closed,
    })
}

/// Result of a measure comparison with its first failing location.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfVerdict {
    pub holds: bool,
    pub witness: Option<Vec<f64>>,
    pub mass1: f64,
    pub mass2: f64,
}

fn merged_points(mu1: &AtomicMeasure, mu2: &AtomicMeasure) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = Vec::new();
    for (p, _) in mu1.atoms.iter().chain(&mu2.atoms) {
        if !pts.iter().any(|q| linf(q, p) <= MERGE_TOL) {
            pts.push(p.clone());
        }
    }
    pts.sort_by(|a, b| cmp_points(a, b));
    pts
}

/// Grid of all coordinate combinations of the atoms, lexicographic.
pub(crate) fn product_grid(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut grid = vec![Vec::new()];
    for axis in axes {
        grid = grid
            .into_iter()
            .flat_map(|prefix: Vec<f64>| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    grid
}

pub(crate) fn axis_values<'a>(
    points: impl IntoIterator<Item = &'a Vec<f64>>,
    kappa: usize,
) -> Vec<Vec<f64>> {
    let mut axes = vec![Vec::<f64>::new(); kappa];
    for p in points {
        for (axis, &v) in axes.iter_mut().zip(p) {
            axis.push(v);
        }
    }
    for axis in &mut axes {
        axis.sort_by(f64::total_cmp);
        axis.dedup();
    }
    axes
}

/// `μ2((-∞, x]) ≤ μ1((-∞, x]) + tol` at every point of the merged grid.
pub fn cdf_leq(mu1: &AtomicMeasure, mu2: &AtomicMeasure, tol: f64) -> Result<CdfVerdict> {
    if mu1.kappa != mu2.kappa {
        return Err(Error::Dimension {
            expected: mu1.kappa,
            found: mu2.kappa,
        });
    }
    let axes = axis_values(
        mu1.atoms.iter().chain(&mu2.atoms).map(|(p, _)| p),
        mu1.kappa,
    );
    for x in product_grid(&axes) {
        let (m1, m2) = (mu1.cdf(&x), mu2.cdf(&x));
        if m2 > m1 + tol {
            return Ok(CdfVerdict {
                holds: false,
                witness: Some(x),
                mass1: m1,
                mass2: m2,
            });
        }
    }
    Ok(CdfVerdict {
        holds: true,
        witness: None,
        mass1: mu1.total_mass(),
        mass2: mu2.total_mass(),
    })
}

/// Downward-closed subset of an atom list, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DownwardClosedAtomSubset {
    pub mask: u32,
    pub iota: usize,
}

impl DownwardClosedAtomSubset {
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        index < 32 && self.mask >> index & 1 == 1
    }

    pub fn members<'a>(&self, points: &'a [Vec<f64>]) -> Vec<&'a Vec<f64>> {
        points
            .iter()
            .enumerate()
            .filter(|(i, _)| self.contains(*i))
            .map(|(_, p)| p)
            .collect()
    }
}

/// All downward-closed subsets of `points` under `≤_ι`, each once, ordered by
/// cardinality and then by bitmask.
pub fn enumerate_downward_closed(
    points: &[Vec<f64>],
    iota: usize,
    cap: usize,
) -> Result<Vec<DownwardClosedAtomSubset>> {
    let m = points.len();
    if m > cap.min(31) {
        return Err(Error::CapExceeded {
            count: m,
            cap: cap.min(31),
        });
    }
    // below[i]: atoms ≤_ι atom i, including i
    let below: Vec<u32> = points
        .iter()
        .map(|y| {
            (0..m)
                .filter(|&j| leq_iota(&points[j], y, iota))
                .fold(0u32, |acc, j| acc | 1 << j)
        })
        .collect();
    let comparable: Vec<u32> = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| below[i] >> j & 1 == 1 || below[j] >> i & 1 == 1)
                .fold(0u32, |a, j| a | 1 << j)
        })
        .collect();
    let mut masks = Vec::new();
    // antichains are grown in index order; each ideal is the closure of its
    // unique antichain of maximal elements
    fn grow(
        start: usize,
        blocked: u32,
        closure: u32,
        below: &[u32],
        comparable: &[u32],
        out: &mut Vec<u32>,
    ) {
        out.push(closure);
        for i in start..below.len() {
            if blocked >> i & 1 == 0 {
                grow(
                    i + 1,
                    blocked | comparable[i],
                    closure | below[i],
                    below,
                    comparable,
                    out,
                );
            }
        }
    }
    grow(0, 0, 0, &below, &comparable, &mut masks);
    masks.sort_by_key(|&mask| (mask.count_ones(), mask));
    masks.dedup();
    Ok(masks
        .into_iter()
        .map(|mask| DownwardClosedAtomSubset { mask, iota })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdealWitness {
    pub ideal: DownwardClosedAtomSubset,
    pub members: Vec<Vec<f64>>,
    pub mass1: f64,
    pub mass2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceVerdict {
    pub holds: bool,
    pub witness: Option<IdealWitness>,
    pub ideals_checked: usize,
}

fn ideal_masses(
    points: &[Vec<f64>],
    ideal: DownwardClosedAtomSubset,
    mu1: &AtomicMeasure,
    mu2: &AtomicMeasure,
) -> (f64, f64) {
    let inside = |p: &[f64]| {
        points
            .iter()
            .enumerate()
            .any(|(i, q)| ideal.contains(i) && linf(q, p) <= MERGE_TOL)
    };
    (mu1.mass_where(inside), mu2.mass_where(inside))
}

fn check_pair(mu1: &AtomicMeasure, mu2: &AtomicMeasure, iota: usize) -> Result<()> {
    if mu1.kappa != mu2.kappa {
        return Err(Error::Dimension {
            expected: mu1.kappa,
            found: mu2.kappa,
        });
    }
    check_iota(iota, mu1.kappa)
}

/// `μ2(D) ≤ μ1(D) + tol` on every ι-lower set, decided on the ideals of the
/// merged atom list.
pub fn lowerset_dominance(
    mu1: &AtomicMeasure,
    mu2: &AtomicMeasure,
    iota: usize,
    tol: f64,
) -> Result<DominanceVerdict> {
    check_pair(mu1, mu2, iota)?;
    let points = merged_points(mu1, mu2);
    let ideals = enumerate_downward_closed(&points, iota, DEFAULT_ENUMERATION_CAP)?;
    for (k, &ideal) in ideals.iter().enumerate() {
        let (m1, m2) = ideal_masses(&points, ideal, mu1, mu2);
        if m2 > m1 + tol {
            let members = ideal.members(&points).into_iter().cloned().collect();
            return Ok(DominanceVerdict {
                holds: false,
                witness: Some(IdealWitness {
                    ideal,
                    members,
                    mass1: m1,
                    mass2: m2,
                }),
                ideals_checked: k + 1,
            });
        }
    }
    Ok(DominanceVerdict {
        holds: true,
        witness: None,
        ideals_checked: ideals.len(),
    })
}

/// Failing integral comparison `∫f dμ1 > ∫f dμ2`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralWitness {
    /// Members of the ideal whose test function failed.
    pub ideal: Vec<Vec<f64>>,
    /// `None` for the complement indicator, `Some(n)` for `min(1, n·d)`.
    pub steepness: Option<f64>,
    pub integral1: f64,
    pub integral2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub iota: usize,
    pub mass1: f64,
    pub mass2: f64,
    /// Lower-set dominance on the enumerated ideals.
    pub lower_sets: DominanceVerdict,
    /// `∫χ_{R^κ∖D} dμ1 ≤ ∫χ_{R^κ∖D} dμ2` for every ideal `D`. Decides the
    /// Borel and integrable function classes, which coincide for atomic
    /// measures.
    pub indicator_family: bool,
    pub indicator_witness: Option<IntegralWitness>,
    /// Verdict of the continuous family `min(1, n·d_D)` per steepness `n`.
    pub mollifier_family: Vec<(f64, bool)>,
    pub mollifier_witness: Option<IntegralWitness>,
}

impl EquivalenceReport {
    /// The dominance verdict agrees with the indicator family.
    pub fn agrees(&self) -> bool {
        self.lower_sets.holds == self.indicator_family
    }

    /// The continuous family can only miss violations, never invent them.
    pub fn mollifiers_consistent(&self) -> bool {
        !self.lower_sets.holds || self.mollifier_family.iter().all(|&(_, ok)| ok)
    }
}

/// Compares set dominance with integral dominance for measures of equal mass.
pub fn dominance_equivalence_check(
    mu1: &AtomicMeasure,
    mu2: &AtomicMeasure,
    iota: usize,
    mass_tol: f64,
) -> Result<EquivalenceReport> {
    check_pair(mu1, mu2, iota)?;
    let (mass1, mass2) = (mu1.total_mass(), mu2.total_mass());
    if (mass1 - mass2).abs() > mass_tol {
        return Err(Error::MassMismatch { mass1, mass2 });
    }
    let lower_sets = lowerset_dominance(mu1, mu2, iota, mass_tol)?;
    let points = merged_points(mu1, mu2);
    let ideals = enumerate_downward_closed(&points, iota, DEFAULT_ENUMERATION_CAP)?;
    let kappa = mu1.kappa;
    let tol = mass_tol.max(1e-12 * (1.0 + mass1));

    let mut indicator_witness = None;
    let mut mollifier_witness = None;
    let mut mollifier_family: Vec<(f64, bool)> =
        MOLLIFIER_STEEPNESS.iter().map(|&n| (n, true)).collect();
    for ideal in &ideals {
        let members: Vec<Vec<f64>> = ideal.members(&points).into_iter().cloned().collect();
        let set = LowerSetGen::new(kappa, iota, members.clone())?;
        if indicator_witness.is_none() {
            let f = ScalarFunction::LowerSetComplementIndicator(set.clone());
            let (i1, i2) = (mu1.integral(|x| f.eval(x))?, mu2.integral(|x| f.eval(x))?);
            if i1 > i2 + tol {
                indicator_witness = Some(IntegralWitness {
                    ideal: members.clone(),
                    steepness: None,
                    integral1: i1,
                    integral2: i2,
                });
            }
        }
        if members.is_empty() {
            continue;
        }
        for (n, ok) in mollifier_family.iter_mut() {
            let f = ScalarFunction::Mollifier {
                set: set.clone(),
                steepness: *n,
            };
            let (i1, i2) = (mu1.integral(|x| f.eval(x))?, mu2.integral(|x| f.eval(x))?);
            if i1 > i2 + tol {
                *ok = false;
                if mollifier_witness.is_none() {
                    mollifier_witness = Some(IntegralWitness {
                        ideal: members.clone(),
                        steepness: Some(*n),
                        integral1: i1,
                        integral2: i2,
                    });
                }
            }
        }
    }
    Ok(EquivalenceReport {
        iota,
        mass1,
        mass2,
        lower_sets,
        indicator_family: indicator_witness.is_none(),
        indicator_witness,
        mollifier_family,
        mollifier_witness,
    })
}

/// What the two one-sided conditions say about total masses when the masses
/// are not assumed equal.
#[derive(Debug, Clone, PartialEq)]
pub struct MassImplications {
    pub mass1: f64,
    pub mass2: f64,
    pub lower_sets_hold: bool,
    /// Nonnegative increasing functions: `∫f dμ1 ≤ ∫f dμ2`, checked on the
    /// complement indicators and the constant 1.
    pub functions_hold: bool,
    /// Lower-set dominance forces `μ2(R^κ) ≤ μ1(R^κ)`.
    pub lower_sets_mass_bound_ok: bool,
    /// Function dominance forces `μ1(R^κ) ≤ μ2(R^κ)`.
    pub functions_mass_bound_ok: bool,
}

pub fn total_mass_implications(
    mu1: &AtomicMeasure,
    mu2: &AtomicMeasure,
    iota: usize,
    tol: f64,
) -> Result<MassImplications> {
    check_pair(mu1, mu2, iota)?;
    let (mass1, mass2) = (mu1.total_mass(), mu2.total_mass());
    let lower = lowerset_dominance(mu1, mu2, iota, tol)?;
    let points = merged_points(mu1, mu2);
    let ideals = enumerate_downward_closed(&points, iota, DEFAULT_ENUMERATION_CAP)?;
    let mut functions_hold = mass1 <= mass2 + tol;
    for ideal in &ideals {
        let (m1, m2) = ideal_masses(&points, *ideal, mu1, mu2);
        if mass1 - m1 > mass2 - m2 + tol {
            functions_hold = false;
        }
    }
    Ok(MassImplications {
        mass1,
        mass2,
        lower_sets_hold: lower.holds,
        functions_hold,
        lower_sets_mass_bound_ok: !lower.holds || mass2 <= mass1 + tol,
        functions_mass_bound_ok: !functions_hold || mass1 <= mass2 + tol,
    })
}

/// `σ ↦ ⟨E_A(σ)h, h⟩` as an atomic measure; numerically null atoms dropped.
pub fn tuple_scalar_measure(t: &CommutingTuple, h: &[C64]) -> Result<AtomicMeasure> {
    if h.len() != t.dim() {
        return Err(Error::Dimension {
            expected: t.dim(),
            found: h.len(),
        });
    }
    let e = joint_measure(t, CLUSTER_TOL)?;
    let norm2: f64 = h.iter().map(|z| z.norm_sqr()).sum();
    let floor = 1e-20 * norm2;
    let atoms = e
        .atoms()
        .iter()
        .map(|a| (a.point.clone(), a.projection.weight(h)))
        .filter(|&(_, w)| w > floor)
        .collect();
    AtomicMeasure::new(t.kappa(), atoms)
}
