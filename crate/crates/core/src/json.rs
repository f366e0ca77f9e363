//! JSON wire formats. Vectors are plain arrays, matrices are row-major
//! arrays of arrays.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{OperatorSpec, ProxKind};
use crate::scalar::Real;

pub fn matrix_from_rows<T: Real>(rows: &[Vec<T>]) -> Result<DMatrix<T>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
        return Err(Error::InvalidSpec(format!(
            "ragged matrix: row of length {} in a {}-column matrix",
            bad.len(),
            ncols
        )));
    }
    Ok(DMatrix::from_row_iterator(
        nrows,
        ncols,
        rows.iter().flat_map(|r| r.iter().copied()),
    ))
}

pub fn matrix_to_rows<T: Real>(m: &DMatrix<T>) -> Vec<Vec<T>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// `#[serde(with = ...)]` adapter for `DVector`.
pub mod vector {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<T: Real, S: Serializer>(v: &DVector<T>, s: S) -> Result<S::Ok, S::Error> {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, T: Real, D: Deserializer<'de>>(d: D) -> Result<DVector<T>, D::Error> {
        Ok(DVector::from_vec(Vec::<T>::deserialize(d)?))
    }
}

/// `#[serde(with = ...)]` adapter for `DMatrix`.
pub mod matrix {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<T: Real, S: Serializer>(m: &DMatrix<T>, s: S) -> Result<S::Ok, S::Error> {
        matrix_to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, T: Real, D: Deserializer<'de>>(d: D) -> Result<DMatrix<T>, D::Error> {
        let rows = Vec::<Vec<T>>::deserialize(d)?;
        matrix_from_rows(&rows).map_err(D::Error::custom)
    }
}

/// `#[serde(with = ...)]` adapter for a list of vectors.
pub mod vector_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<T: Real, S: Serializer>(vs: &[DVector<T>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[T]> = vs.iter().map(|v| v.as_slice()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, T: Real, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<DVector<T>>, D::Error> {
        Ok(Vec::<Vec<T>>::deserialize(d)?
            .into_iter()
            .map(DVector::from_vec)
            .collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorWire<T> {
    Zero,
    ScaledIdentity {
        alpha: T,
    },
    Linear {
        #[serde(rename = "M")]
        m: Vec<Vec<T>>,
    },
    ProxQuadratic {
        #[serde(rename = "Q")]
        hessian: Vec<Vec<T>>,
        q: Vec<T>,
    },
    ProxL1 {
        weight: T,
    },
    ProxBox {
        lo: Vec<T>,
        hi: Vec<T>,
    },
    ProxAffine {
        #[serde(rename = "E")]
        constraint: Vec<Vec<T>>,
        e: Vec<T>,
    },
    Inverse {
        inner: Box<OperatorWire<T>>,
    },
    Block2x2 {
        #[serde(rename = "A")]
        a: Box<OperatorWire<T>>,
        #[serde(rename = "B")]
        b: Box<OperatorWire<T>>,
        #[serde(rename = "C")]
        coupling: Vec<Vec<T>>,
    },
}

impl<T: Real> TryFrom<OperatorWire<T>> for OperatorSpec<T> {
    type Error = Error;

    fn try_from(wire: OperatorWire<T>) -> Result<Self> {
        let op = match wire {
            OperatorWire::Zero => OperatorSpec::Zero,
            OperatorWire::ScaledIdentity { alpha } => OperatorSpec::ScaledIdentity { alpha },
            OperatorWire::Linear { m } => OperatorSpec::LinearRelation {
                matrix: matrix_from_rows(&m)?,
            },
            OperatorWire::ProxQuadratic { hessian, q } => {
                OperatorSpec::ProxFunction(ProxKind::Quadratic {
                    hessian: matrix_from_rows(&hessian)?,
                    linear: DVector::from_vec(q),
                })
            }
            OperatorWire::ProxL1 { weight } => OperatorSpec::ProxFunction(ProxKind::L1 { weight }),
            OperatorWire::ProxBox { lo, hi } => {
                OperatorSpec::ProxFunction(ProxKind::IndicatorBox {
                    lo: DVector::from_vec(lo),
                    hi: DVector::from_vec(hi),
                })
            }
            OperatorWire::ProxAffine { constraint, e } => {
                OperatorSpec::ProxFunction(ProxKind::IndicatorAffine {
                    constraint: matrix_from_rows(&constraint)?,
                    rhs: DVector::from_vec(e),
                })
            }
            OperatorWire::Inverse { inner } => {
                OperatorSpec::Inverse(Box::new((*inner).try_into()?))
            }
            OperatorWire::Block2x2 { a, b, coupling } => OperatorSpec::Block2x2 {
                a: Box::new((*a).try_into()?),
                b: Box::new((*b).try_into()?),
                coupling: matrix_from_rows(&coupling)?,
            },
        };
        op.validate()?;
        Ok(op)
    }
}

impl<T: Real> From<OperatorSpec<T>> for OperatorWire<T> {
    fn from(op: OperatorSpec<T>) -> Self {
        match op {
            OperatorSpec::Zero => Self::Zero,
            OperatorSpec::ScaledIdentity { alpha } => Self::ScaledIdentity { alpha },
            OperatorSpec::LinearRelation { matrix } => Self::Linear {
                m: matrix_to_rows(&matrix),
            },
            OperatorSpec::ProxFunction(kind) => match kind {
                ProxKind::Quadratic { hessian, linear } => Self::ProxQuadratic {
                    hessian: matrix_to_rows(&hessian),
                    q: linear.as_slice().to_vec(),
                },
                ProxKind::L1 { weight } => Self::ProxL1 { weight },
                ProxKind::IndicatorBox { lo, hi } => Self::ProxBox {
                    lo: lo.as_slice().to_vec(),
                    hi: hi.as_slice().to_vec(),
                },
                ProxKind::IndicatorAffine { constraint, rhs } => Self::ProxAffine {
                    constraint: matrix_to_rows(&constraint),
                    e: rhs.as_slice().to_vec(),
                },
            },
            OperatorSpec::Inverse(inner) => Self::Inverse {
                inner: Box::new((*inner).into()),
            },
            OperatorSpec::Block2x2 { a, b, coupling } => Self::Block2x2 {
                a: Box::new((*a).into()),
                b: Box::new((*b).into()),
                coupling: matrix_to_rows(&coupling),
            },
        }
    }
}
