//! Characterizations of the spectral order for positive tuples through
//! monomials, growth of `‖A^α h‖` and bounded vectors.

use super::{loewner_leq, OrderVerdict, Witness};
use crate::error::{Error, Result};
use crate::linalg::{psd_margin, C64};
use crate::spectral::{
    calculus_scalar, joint_measure, CommutingTuple, JointSpectralMeasure, ScalarFunction,
    CLUSTER_TOL,
};

/// Absolute tolerance on joint eigenvalues for positivity.
const POSITIVITY_TOL: f64 = 1e-9;

/// Multi-indices with `|α| ≤ max`, by total order and then lexicographically.
pub fn multi_indices(kappa: usize, max: u32) -> Vec<Vec<u32>> {
    fn fill(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=remaining {
            prefix.push(first);
            fill(prefix, remaining - first, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if kappa == 0 {
        return out;
    }
    for total in 0..=max {
        fill(&mut Vec::with_capacity(kappa), total, kappa, &mut out);
    }
    out
}

fn positive_measure(t: &CommutingTuple) -> Result<JointSpectralMeasure> {
    let e = joint_measure(t, CLUSTER_TOL)?;
    for atom in e.atoms() {
        if let Some(index) = atom.point.iter().position(|&x| x < -POSITIVITY_TOL) {
            return Err(Error::Positivity { index });
        }
    }
    Ok(e)
}

fn positive_pair(
    a: &CommutingTuple,
    b: &CommutingTuple,
) -> Result<(JointSpectralMeasure, JointSpectralMeasure)> {
    super::check_pair(a, b)?;
    Ok((positive_measure(a)?, positive_measure(b)?))
}

fn monomial_scan(
    ea: &JointSpectralMeasure,
    eb: &JointSpectralMeasure,
    alphas: &[Vec<u32>],
    scale: impl Fn(&[u32]) -> f64,
    tol: f64,
) -> Result<OrderVerdict> {
    let mut worst: f64 = 0.0;
    for alpha in alphas {
        let f = ScalarFunction::Monomial(alpha.clone());
        let pa = calculus_scalar(ea, &f)?;
        let pb = calculus_scalar(eb, &f)?.scale(scale(alpha));
        if !loewner_leq(&pa, &pb, tol)? {
            let defect = -psd_margin(&pb.sub(&pa))?;
            return Ok(OrderVerdict::fail(
                Witness::MultiIndex(alpha.clone()),
                defect,
            ));
        }
        worst = worst.max(-psd_margin(&pb.sub(&pa))?);
    }
    Ok(OrderVerdict::pass(worst.max(0.0)))
}

/// Checks `A^α ≤ B^α` for every `|α| ≤ alpha_max`; the witness is the first
/// failing index. The scan runs whether or not `A ⪯ B`, so it can be used to
/// look for violations.
pub fn olson_necessity_scan(
    a: &CommutingTuple,
    b: &CommutingTuple,
    alpha_max: u32,
    tol: f64,
) -> Result<OrderVerdict> {
    let (ea, eb) = positive_pair(a, b)?;
    monomial_scan(&ea, &eb, &multi_indices(a.kappa(), alpha_max), |_| 1.0, tol)
}

/// Checks `A^α ≤ r_α B^α` for every `|α| ≤ alpha_max`.
pub fn scaled_monomial_check(
    a: &CommutingTuple,
    b: &CommutingTuple,
    r: &dyn Fn(&[u32]) -> f64,
    alpha_max: u32,
    tol: f64,
) -> Result<OrderVerdict> {
    let (ea, eb) = positive_pair(a, b)?;
    let alphas = multi_indices(a.kappa(), alpha_max);
    if let Some(alpha) = alphas.iter().find(|alpha| !(r(alpha) >= 1.0)) {
        return Err(Error::Parameter(format!(
            "scale factor r{alpha:?} = {} is below 1",
            r(alpha)
        )));
    }
    monomial_scan(&ea, &eb, &alphas, r, tol)
}

/// Shell maxima of `(‖A^α h‖ / ‖B^α h‖)^{1/|α|}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRatioReport {
    /// `(|α|, max ratio on that shell, maximizing α)`, for shells that meet
    /// the index set.
    pub shells: Vec<(u32, f64, Vec<u32>)>,
    /// Maximum over the outermost tested shell.
    pub l_hat: f64,
    pub index_set: Vec<Vec<u32>>,
}

impl GrowthRatioReport {
    pub fn bounded_by(&self, bound: f64) -> bool {
        self.l_hat <= bound
    }
}

/// `‖φ_α(A) h‖` through the spectral integral over the atoms carrying `h`.
fn monomial_norms(e: &JointSpectralMeasure, h: &[C64]) -> Vec<(Vec<f64>, f64)> {
    let norm2: f64 = h.iter().map(|z| z.norm_sqr()).sum();
    let floor = 1e-20 * norm2;
    e.atoms()
        .iter()
        .map(|a| (a.point.clone(), a.projection.weight(h)))
        .filter(|&(_, w)| w > floor)
        .collect()
}

fn power_norm(weights: &[(Vec<f64>, f64)], alpha: &[u32]) -> f64 {
    weights
        .iter()
        .map(|(p, w)| {
            let m: f64 = p
                .iter()
                .zip(alpha)
                .map(|(&x, &k)| x.powi(k as i32))
                .product();
            m * m * w
        })
        .sum::<f64>()
        .sqrt()
}

/// `a/b` with `0/0 = 0` and `a/0 = ∞` for `a > 0`.
fn ratio(num: f64, den: f64) -> f64 {
    match (num == 0.0, den == 0.0) {
        (true, _) => 0.0,
        (false, true) => f64::INFINITY,
        (false, false) => num / den,
    }
}

/// Predicate selecting multi-indices.
pub type IndexFilter<'a> = &'a dyn Fn(&[u32]) -> bool;

/// Growth ratios over `1 ≤ |α| ≤ alpha_max`, restricted to the indices
/// accepted by `filter`.
pub fn growth_ratio(
    a: &CommutingTuple,
    b: &CommutingTuple,
    h: &[C64],
    filter: Option<IndexFilter>,
    alpha_max: u32,
) -> Result<GrowthRatioReport> {
    let (ea, eb) = positive_pair(a, b)?;
    if h.len() != a.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: h.len(),
        });
    }
    let (wa, wb) = (monomial_norms(&ea, h), monomial_norms(&eb, h));
    let index_set: Vec<Vec<u32>> = multi_indices(a.kappa(), alpha_max)
        .into_iter()
        .filter(|alpha| alpha.iter().sum::<u32>() > 0 && filter.is_none_or(|f| f(alpha)))
        .collect();
    let mut shells: Vec<(u32, f64, Vec<u32>)> = Vec::new();
    for alpha in &index_set {
        let order: u32 = alpha.iter().sum();
        let r = ratio(power_norm(&wa, alpha), power_norm(&wb, alpha)).powf(1.0 / order as f64);
        match shells.last_mut() {
            Some((o, best, arg)) if *o == order => {
                if r > *best {
                    *best = r;
                    *arg = alpha.clone();
                }
            }
            _ => shells.push((order, r, alpha.clone())),
        }
    }
    let l_hat = shells.last().map_or(0.0, |s| s.1);
    Ok(GrowthRatioReport {
        shells,
        l_hat,
        index_set,
    })
}

/// Two independent membership tests for the joint bounded vectors with
/// bound `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedVectorReport {
    /// `‖(I − F_A(a)) h‖ ≤ tol ‖h‖`.
    pub via_range: bool,
    /// `max_α ‖A^α h‖ / a^α ≤ (1 + tol) ‖h‖` over `|α| ≤ alpha_max`.
    pub via_growth: bool,
    /// The fitted constant `max_α ‖A^α h‖ / a^α`.
    pub constant: f64,
    pub norm: f64,
}

impl BoundedVectorReport {
    pub fn agree(&self) -> bool {
        self.via_range == self.via_growth
    }
}

pub fn bounded_vector_membership(
    a: &CommutingTuple,
    h: &[C64],
    bound: &[f64],
    alpha_max: u32,
    tol: f64,
) -> Result<BoundedVectorReport> {
    let e = positive_measure(a)?;
    if h.len() != a.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: h.len(),
        });
    }
    if bound.len() != a.kappa() {
        return Err(Error::Dimension {
            expected: a.kappa(),
            found: bound.len(),
        });
    }
    if bound.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::Parameter(format!(
            "bound must lie in [0, ∞)^κ, got {bound:?}"
        )));
    }
    let norm = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let outside: f64 = e
        .atoms()
        .iter()
        .filter(|atom| !atom.point.iter().zip(bound).all(|(x, b)| x <= b))
        .map(|atom| atom.projection.weight(h))
        .sum();
    let via_range = outside.sqrt() <= tol * norm;
    let weights = monomial_norms(&e, h);
    let constant = multi_indices(a.kappa(), alpha_max)
        .iter()
        .map(|alpha| {
            let scale: f64 = bound
                .iter()
                .zip(alpha)
                .map(|(&b, &k)| b.powi(k as i32))
                .product();
            ratio(power_norm(&weights, alpha), scale)
        })
        .fold(0.0, f64::max);
    let via_growth = constant <= (1.0 + tol) * norm;
    Ok(BoundedVectorReport {
        via_range,
        via_growth,
        constant,
        norm,
    })
}

/// For each axis `j`, the exponents `s ≤ s_max` with `A_j^s ≤ B_j^s`.
pub fn axis_lambda_sets(
    a: &CommutingTuple,
    b: &CommutingTuple,
    s_max: u32,
    tol: f64,
) -> Result<Vec<Vec<u32>>> {
    let (ea, eb) = positive_pair(a, b)?;
    let kappa = a.kappa();
    (0..kappa)
        .map(|j| {
            let mut admitted = Vec::new();
            for s in 0..=s_max {
                let mut alpha = vec![0; kappa];
                alpha[j] = s;
                let f = ScalarFunction::Monomial(alpha);
                if loewner_leq(&calculus_scalar(&ea, &f)?, &calculus_scalar(&eb, &f)?, tol)? {
                    admitted.push(s);
                }
            }
            Ok(admitted)
        })
        .collect()
}
