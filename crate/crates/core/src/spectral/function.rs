//! Closed-form Borel functions on R^κ used as calculus symbols.

use crate::error::{Error, Result};
use crate::measures::LowerSetGen;

/// Positive or negative part selector for `f_±(x) = (x ± |x|) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Sign::Plus => 0.5 * (x + x.abs()),
            Sign::Minus => 0.5 * (x - x.abs()),
        }
    }

    /// Parses a sign string such as `"+-+"`.
    pub fn parse_vector(s: &str) -> Result<Vec<Sign>> {
        s.chars()
            .map(|ch| match ch {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::Parameter(format!(
                    "invalid sign character {other:?}"
                ))),
            })
            .collect()
    }
}

/// A real function on R^κ, either a tagged closed form or a lookup table.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFunction {
    Constant(f64),
    /// `x ↦ x_j` (0-based coordinate).
    Coordinate(usize),
    /// `x ↦ offset + Σ c_j x_j`.
    Linear {
        coeffs: Vec<f64>,
        offset: f64,
    },
    /// `x ↦ x^α` with `0^0 = 1`.
    Monomial(Vec<u32>),
    /// `x ↦ Π |x_j|^{β_j} · χ_{[0,∞)^κ}(x)` with `0^0 = 1`.
    FractionalPower(Vec<f64>),
    /// `x ↦ f_±(x_j)`.
    Part {
        coordinate: usize,
        sign: Sign,
    },
    /// `x ↦ min(upper, max(lower, inner(x)))`.
    Clip {
        lower: f64,
        upper: f64,
        inner: Box<ScalarFunction>,
    },
    /// Indicator of the lower set `↓_ι Ω`.
    LowerSetIndicator(LowerSetGen),
    /// Indicator of the complement of `↓_ι Ω`.
    LowerSetComplementIndicator(LowerSetGen),
    /// ℓ¹ distance to `↓_ι Ω`.
    LowerSetDistance(LowerSetGen),
    /// `min(1, steepness · d_Ω(x))`.
    Mollifier {
        set: LowerSetGen,
        steepness: f64,
    },
    /// Values given only at listed points; evaluation elsewhere fails.
    Tabulated(Vec<(Vec<f64>, f64)>),
}

impl ScalarFunction {
    pub fn sum(kappa: usize) -> Self {
        ScalarFunction::Linear {
            coeffs: vec![1.0; kappa],
            offset: 0.0,
        }
    }

    pub fn product(kappa: usize) -> Self {
        ScalarFunction::Monomial(vec![1; kappa])
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let coord = |j: usize| {
            x.get(j).copied().ok_or(Error::Index {
                index: j,
                len: x.len(),
            })
        };
        Ok(match self {
            ScalarFunction::Constant(c) => *c,
            ScalarFunction::Coordinate(j) => coord(*j)?,
            ScalarFunction::Linear { coeffs, offset } => {
                check_arity(coeffs.len(), x)?;
                offset + coeffs.iter().zip(x).map(|(c, v)| c * v).sum::<f64>()
            }
            ScalarFunction::Monomial(alpha) => {
                check_arity(alpha.len(), x)?;
                alpha
                    .iter()
                    .zip(x)
                    .map(|(&a, &v)| v.powi(a as i32))
                    .product()
            }
            ScalarFunction::FractionalPower(beta) => {
                check_arity(beta.len(), x)?;
                if x.iter().any(|&v| v < 0.0) {
                    0.0
                } else {
                    beta.iter()
                        .zip(x)
                        .map(|(&b, &v)| if b == 0.0 { 1.0 } else { v.abs().powf(b) })
                        .product()
                }
            }
            ScalarFunction::Part { coordinate, sign } => sign.apply(coord(*coordinate)?),
            ScalarFunction::Clip {
                lower,
                upper,
                inner,
            } => inner.eval(x)?.max(*lower).min(*upper),
            ScalarFunction::LowerSetIndicator(s) => f64::from(u8::from(s.contains(x))),
            ScalarFunction::LowerSetComplementIndicator(s) => f64::from(u8::from(!s.contains(x))),
            ScalarFunction::LowerSetDistance(s) => s.distance(x)?,
            ScalarFunction::Mollifier { set, steepness } => (steepness * set.distance(x)?).min(1.0),
            ScalarFunction::Tabulated(table) => table
                .iter()
                .find(|(p, _)| p.as_slice() == x)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::Evaluation { point: x.to_vec() })?,
        })
    }

    /// Whether the tag is increasing on all of R^κ by construction (with
    /// respect to `≤_ι` for lower-set based tags, `≤` otherwise). Tabulated
    /// and monomial symbols make no claim.
    pub fn claims_increasing(&self) -> bool {
        match self {
            ScalarFunction::Constant(_)
            | ScalarFunction::Coordinate(_)
            | ScalarFunction::FractionalPower(_)
            | ScalarFunction::Part { .. }
            | ScalarFunction::LowerSetComplementIndicator(_)
            | ScalarFunction::LowerSetDistance(_) => true,
            ScalarFunction::Mollifier { steepness, .. } => *steepness >= 0.0,
            ScalarFunction::Linear { coeffs, .. } => coeffs.iter().all(|&c| c >= 0.0),
            ScalarFunction::Clip { inner, .. } => inner.claims_increasing(),
            ScalarFunction::Monomial(_)
            | ScalarFunction::LowerSetIndicator(_)
            | ScalarFunction::Tabulated(_) => false,
        }
    }
}

fn check_arity(expected: usize, x: &[f64]) -> Result<()> {
    if expected == x.len() {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected,
            found: x.len(),
        })
    }
}

/// A map R^κ → R^ι given componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFunction(pub Vec<ScalarFunction>);

impl VectorFunction {
    pub fn identity(kappa: usize) -> Self {
        VectorFunction((0..kappa).map(ScalarFunction::Coordinate).collect())
    }

    /// `f_ε = f_{ε_1} × … × f_{ε_κ}`.
    pub fn parts(eps: &[Sign]) -> Self {
        VectorFunction(
            eps.iter()
                .enumerate()
                .map(|(j, &sign)| ScalarFunction::Part {
                    coordinate: j,
                    sign,
                })
                .collect(),
        )
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.0.iter().map(|f| f.eval(x)).collect()
    }

    pub fn claims_increasing(&self) -> bool {
        self.0.iter().all(ScalarFunction::claims_increasing)
    }
}

impl From<ScalarFunction> for VectorFunction {
    fn from(f: ScalarFunction) -> Self {
        VectorFunction(vec![f])
    }
}
