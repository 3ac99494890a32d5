//! Projection-valued distribution functions on a finite grid, their box
//! differences, the resolution-of-the-identity axioms and reconstruction of
//! the underlying spectral measure.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator, Projection};
use crate::measures::{axis_values, product_grid};
use crate::spectral::{Atom, JointSpectralMeasure, CLUSTER_TOL};

/// Eigenvalue tolerance for recognizing a box difference as a projection.
pub const BOX_PROJ_TOL: f64 = 1e-7;

/// Right-continuous step function `F: R^κ → P(H)` taking the stored value
/// of the nearest grid point below `x`, and 0 when `x` is below the grid in
/// some coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjValuedStepFunction {
    kappa: usize,
    dim: usize,
    grid: Vec<Vec<f64>>,
    values: Vec<Projection>,
}

impl ProjValuedStepFunction {
    /// `values` are listed in lexicographic order of grid index vectors.
    pub fn new(dim: usize, grid: Vec<Vec<f64>>, values: Vec<Projection>) -> Result<Self> {
        let kappa = grid.len();
        if kappa == 0 {
            return Err(Error::Parameter("grid needs at least one axis".into()));
        }
        for axis in &grid {
            if axis.is_empty()
                || axis.windows(2).any(|w| !(w[0] < w[1]))
                || axis.iter().any(|v| !v.is_finite())
            {
                return Err(Error::Parameter(
                    "grid axes must be finite, nonempty and strictly increasing".into(),
                ));
            }
        }
        let cells: usize = grid.iter().map(Vec::len).product();
        if values.len() != cells {
            return Err(Error::Dimension {
                expected: cells,
                found: values.len(),
            });
        }
        if let Some(p) = values.iter().find(|p| p.dim() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                found: p.dim(),
            });
        }
        Ok(ProjValuedStepFunction {
            kappa,
            dim,
            grid,
            values,
        })
    }

    /// `x ↦ E((-∞, x])` sampled on the atom coordinate grid.
    pub fn from_measure(e: &JointSpectralMeasure) -> Self {
        let grid = axis_values(e.atoms().iter().map(|a| &a.point), e.kappa());
        let values = product_grid(&grid)
            .iter()
            .map(|x| e.distribution(x))
            .collect();
        ProjValuedStepFunction {
            kappa: e.kappa(),
            dim: e.dim(),
            grid,
            values,
        }
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &[Vec<f64>] {
        &self.grid
    }

    pub fn values(&self) -> &[Projection] {
        &self.values
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.grid)
            .fold(0, |acc, (&i, axis)| acc * axis.len() + i)
    }

    /// Grid index vectors in lexicographic order.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        let ranges: Vec<Vec<f64>> = self
            .grid
            .iter()
            .map(|axis| (0..axis.len()).map(|i| i as f64).collect())
            .collect();
        product_grid(&ranges)
            .into_iter()
            .map(|p| p.into_iter().map(|i| i as usize).collect())
            .collect()
    }

    pub fn set_value(&mut self, idx: &[usize], p: Projection) -> Result<()> {
        if idx.len() != self.kappa {
            return Err(Error::Dimension {
                expected: self.kappa,
                found: idx.len(),
            });
        }
        if let Some((&i, axis)) = idx
            .iter()
            .zip(&self.grid)
            .find(|(&i, axis)| i >= axis.len())
        {
            return Err(Error::Index {
                index: i,
                len: axis.len(),
            });
        }
        if p.dim() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: p.dim(),
            });
        }
        let k = self.flat(idx);
        self.values[k] = p;
        Ok(())
    }

    /// `F(x)`; `-∞` coordinates give the zero projection.
    pub fn value_at(&self, x: &[f64]) -> Projection {
        let mut idx = Vec::with_capacity(self.kappa);
        for (&v, axis) in x.iter().zip(&self.grid) {
            match axis.iter().rposition(|&g| g <= v) {
                Some(i) => idx.push(i),
                None => return Projection::zero(self.dim),
            }
        }
        self.values[self.flat(&idx)].clone()
    }

    fn upper_corner(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .zip(&self.grid)
            .map(|(&i, axis)| axis[i])
            .collect()
    }

    fn lower_corner(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .zip(&self.grid)
            .map(|(&i, axis)| {
                if i == 0 {
                    f64::NEG_INFINITY
                } else {
                    axis[i - 1]
                }
            })
            .collect()
    }
}

/// `F(a, b]`: inclusion–exclusion over the `2^κ` corners of the box.
pub fn difference_box(
    f: &ProjValuedStepFunction,
    a: &[f64],
    b: &[f64],
) -> Result<HermitianOperator> {
    if a.len() != f.kappa || b.len() != f.kappa {
        return Err(Error::Dimension {
            expected: f.kappa,
            found: a.len().max(b.len()),
        });
    }
    if !a.iter().zip(b).all(|(x, y)| x <= y) {
        return Err(Error::BoxOrder {
            a: a.to_vec(),
            b: b.to_vec(),
        });
    }
    let mut sum = ComplexMatrix::zeros(f.dim, f.dim);
    for mask in 0u32..(1 << f.kappa) {
        let corner: Vec<f64> = (0..f.kappa)
            .map(|j| if mask >> j & 1 == 1 { a[j] } else { b[j] })
            .collect();
        let p = f.value_at(&corner);
        if p.rank() == 0 {
            continue;
        }
        let sign = if mask.count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        sum = sum.add(&p.matrix().scale(sign));
    }
    Ok(HermitianOperator::from_trusted(sum))
}

/// Outcome of checking the three axioms on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionReport {
    /// Every grid cell difference is a projection.
    pub axiom_a: bool,
    /// First failing cell as `(lower corner, upper corner)`, with `-∞` for
    /// cells on the lower boundary.
    pub witness_box: Option<(Vec<f64>, Vec<f64>)>,
    /// Right-continuity; holds by the step representation.
    pub axiom_b: bool,
    /// The value at the top grid corner is the identity.
    pub axiom_c: bool,
    pub identity_defect: f64,
}

impl ResolutionReport {
    pub fn passes(&self) -> bool {
        self.axiom_a && self.axiom_b && self.axiom_c
    }
}

fn cell_differences(f: &ProjValuedStepFunction) -> Result<Vec<(Vec<usize>, HermitianOperator)>> {
    f.cells()
        .into_iter()
        .map(|idx| {
            let d = difference_box(f, &f.lower_corner(&idx), &f.upper_corner(&idx))?;
            Ok((idx, d))
        })
        .collect()
}

pub fn validate_resolution(f: &ProjValuedStepFunction) -> Result<ResolutionReport> {
    let mut witness_box = None;
    for (idx, d) in cell_differences(f)? {
        if Projection::from_operator(&d, BOX_PROJ_TOL)?.is_none() {
            witness_box = Some((f.lower_corner(&idx), f.upper_corner(&idx)));
            break;
        }
    }
    let top: Vec<f64> = f.grid.iter().map(|axis| axis[axis.len() - 1]).collect();
    let identity_defect = f
        .value_at(&top)
        .matrix()
        .sub(&ComplexMatrix::identity(f.dim))
        .frobenius_norm();
    Ok(ResolutionReport {
        axiom_a: witness_box.is_none(),
        witness_box,
        axiom_b: true,
        axiom_c: identity_defect <= BOX_PROJ_TOL,
        identity_defect,
    })
}

/// The atomic measure with `E((a, b]) = F(a, b]`: one atom at the upper
/// corner of every cell with a nonzero difference.
pub fn reconstruct_measure(f: &ProjValuedStepFunction) -> Result<JointSpectralMeasure> {
    let report = validate_resolution(f)?;
    if let Some((lo, hi)) = &report.witness_box {
        return Err(Error::Validation {
            axiom: 'A',
            detail: format!("box ({lo:?}, {hi:?}] is not a projection"),
        });
    }
    if !report.axiom_c {
        return Err(Error::Validation {
            axiom: 'C',
            detail: format!(
                "top corner differs from the identity by {:e}",
                report.identity_defect
            ),
        });
    }
    let mut atoms = Vec::new();
    for (idx, d) in cell_differences(f)? {
        let p = Projection::from_operator(&d, BOX_PROJ_TOL)?.expect("checked above");
        if p.rank() > 0 {
            atoms.push(Atom {
                point: f.upper_corner(&idx),
                projection: p,
            });
        }
    }
    JointSpectralMeasure::from_atoms(f.kappa, f.dim, atoms, CLUSTER_TOL)
}
