//! Scalar abstraction shared by every module.
//!
//! All numerical code is written against [`Real`], which bundles the
//! `nalgebra` field operations with the `num-traits` conversions used for
//! literals and reporting. Tolerances are scalar-dependent: the thresholds
//! that make sense in `f64` are far below `f32` round-off.

use std::fmt;

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Numerical thresholds used by construction checks and classifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Relative slack for positive-semidefiniteness of symmetric parts.
    pub psd: T,
    /// Symmetry defect at or below which a resolvent is classified proximal.
    pub proximal: T,
    /// Symmetry defect above which a resolvent is classified non-proximal.
    pub not_proximal: T,
    /// Cycle sums above this value count as violations of cyclic monotonicity.
    pub cycle_violation: T,
    /// Relative residual allowed when probing a map for linearity.
    pub linearity: T,
    /// Relative slack for symmetry checks on user-supplied matrices.
    pub symmetry: T,
}

pub trait Real:
    RealField
    + Copy
    + FromPrimitive
    + ToPrimitive
    + Default
    + fmt::Display
    + fmt::LowerExp
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    fn tolerances() -> Tolerances<Self>;

    /// Converts an `f64` literal. Every supported scalar represents (or rounds) all finite doubles.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("real scalar converts to f64")
    }
}

impl Real for f64 {
    fn tolerances() -> Tolerances<Self> {
        Tolerances {
            psd: 1e-10,
            proximal: 1e-8,
            not_proximal: 1e-6,
            cycle_violation: 1e-8,
            linearity: 1e-10,
            symmetry: 1e-10,
        }
    }
}

impl Real for f32 {
    fn tolerances() -> Tolerances<Self> {
        Tolerances {
            psd: 1e-5,
            proximal: 1e-4,
            not_proximal: 1e-3,
            cycle_violation: 1e-4,
            linearity: 1e-4,
            symmetry: 1e-5,
        }
    }
}
