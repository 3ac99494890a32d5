//! JSON interchange for tuples and atomic measures.
//!
//! Tuples: `{"schema": "specorder/1", "kappa": K, "dim": N, "matrices":
//! [[[re, im], ...], ...]}` with each matrix flattened row-major. Measures:
//! `{"schema": "specorder-measure/1", "kappa": K, "atoms": [{"point": [...],
//! "weight": w}, ...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator, C64, HERM_TOL};
use crate::measures::AtomicMeasure;
use crate::spectral::{validate_tuple, CommutingTuple, COMM_TOL};

pub const TUPLE_SCHEMA: &str = "specorder/1";
pub const MEASURE_SCHEMA: &str = "specorder-measure/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleDoc {
    pub schema: String,
    pub kappa: usize,
    pub dim: usize,
    pub matrices: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub point: Vec<f64>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub schema: String,
    pub kappa: usize,
    pub atoms: Vec<AtomDoc>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
}

fn check_schema(found: &str, expected: &str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "unsupported schema {found:?}, expected {expected:?}"
        )))
    }
}

impl TupleDoc {
    pub fn from_tuple(t: &CommutingTuple) -> Self {
        TupleDoc::from_operators(t.ops())
    }

    pub fn from_operators(ops: &[HermitianOperator]) -> Self {
        TupleDoc {
            schema: TUPLE_SCHEMA.to_string(),
            kappa: ops.len(),
            dim: ops.first().map_or(0, HermitianOperator::dim),
            matrices: ops
                .iter()
                .map(|op| {
                    op.matrix()
                        .as_slice()
                        .iter()
                        .map(|z| [z.re, z.im])
                        .collect()
                })
                .collect(),
        }
    }

    /// Builds the operators without checking commutation.
    pub fn operators(&self) -> Result<Vec<HermitianOperator>> {
        check_schema(&self.schema, TUPLE_SCHEMA)?;
        if self.kappa == 0 || self.dim == 0 {
            return Err(Error::Parse("kappa and dim must be positive".into()));
        }
        let entries = self
            .dim
            .checked_mul(self.dim)
            .ok_or_else(|| Error::Parse(format!("dim {} is too large", self.dim)))?;
        if self.matrices.len() != self.kappa {
            return Err(Error::Parse(format!(
                "kappa is {} but {} matrices are given",
                self.kappa,
                self.matrices.len()
            )));
        }
        self.matrices
            .iter()
            .enumerate()
            .map(|(j, values)| {
                if values.len() != entries {
                    return Err(Error::Parse(format!(
                        "matrix {j} has {} entries, expected {entries}",
                        values.len()
                    )));
                }
                let data = values.iter().map(|&[re, im]| C64::new(re, im)).collect();
                HermitianOperator::with_tolerance(
                    ComplexMatrix::new(self.dim, self.dim, data)?,
                    HERM_TOL,
                )
            })
            .collect()
    }

    pub fn to_tuple(&self, tol_comm: f64) -> Result<CommutingTuple> {
        validate_tuple(self.operators()?, tol_comm)
    }
}

impl MeasureDoc {
    pub fn from_measure(m: &AtomicMeasure) -> Self {
        MeasureDoc {
            schema: MEASURE_SCHEMA.to_string(),
            kappa: m.kappa(),
            atoms: m
                .atoms()
                .iter()
                .map(|(p, w)| AtomDoc {
                    point: p.clone(),
                    weight: *w,
                })
                .collect(),
        }
    }

    pub fn to_measure(&self) -> Result<AtomicMeasure> {
        check_schema(&self.schema, MEASURE_SCHEMA)?;
        if self.kappa == 0 {
            return Err(Error::Parse("kappa must be positive".into()));
        }
        AtomicMeasure::new(
            self.kappa,
            self.atoms
                .iter()
                .map(|a| (a.point.clone(), a.weight))
                .collect(),
        )
    }
}

/// Parses and validates a tuple document.
pub fn parse_tuple(text: &str) -> Result<CommutingTuple> {
    parse_tuple_with_tol(text, COMM_TOL)
}

pub fn parse_tuple_with_tol(text: &str, tol_comm: f64) -> Result<CommutingTuple> {
    serde_json::from_str::<TupleDoc>(text)
        .map_err(json_error)?
        .to_tuple(tol_comm)
}

pub fn parse_measure(text: &str) -> Result<AtomicMeasure> {
    serde_json::from_str::<MeasureDoc>(text)
        .map_err(json_error)?
        .to_measure()
}

pub fn tuple_to_json(t: &CommutingTuple) -> String {
    serde_json::to_string_pretty(&TupleDoc::from_tuple(t)).expect("tuple documents serialize")
}

pub fn operators_to_json(ops: &[HermitianOperator]) -> String {
    serde_json::to_string_pretty(&TupleDoc::from_operators(ops)).expect("tuple documents serialize")
}

pub fn measure_to_json(m: &AtomicMeasure) -> String {
    serde_json::to_string_pretty(&MeasureDoc::from_measure(m)).expect("measure documents serialize")
}
