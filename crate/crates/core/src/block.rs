//! The reduced resolvent form of the splitting map.
//!
//! With `𝓛 = [[B⁻¹, −τI], [τI, A⁻¹]]` and `𝓚 = √τ·[I I]`, the splitting map in
//! the scaled variable `v = z/√τ` is the resolvent
//!
//! ```text
//! v⁺ = (I + 𝓚𝓛⁻¹𝓚ᵀ)⁻¹ v
//! ```
//!
//! of the maximally monotone operator `𝓚𝓛⁻¹𝓚ᵀ = (𝓛 ▷ 𝓚)⁻¹`. This module
//! evaluates that resolvent along three independent routes and exposes the
//! matrices involved when `A` and `B` are linear.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::drs::{drs_map, infer_dim};
use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::OperatorSpec;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "BlockSystemWire<T>",
    into = "BlockSystemWire<T>",
    bound(serialize = "T: Real", deserialize = "T: Real")
)]
pub struct BlockSystem<T: Real> {
    a: OperatorSpec<T>,
    b: OperatorSpec<T>,
    tau: T,
    sqrt_tau: T,
    n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct BlockSystemWire<T: Real> {
    #[serde(rename = "A")]
    a: OperatorSpec<T>,
    #[serde(rename = "B")]
    b: OperatorSpec<T>,
    tau: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

impl<T: Real> TryFrom<BlockSystemWire<T>> for BlockSystem<T> {
    type Error = Error;

    fn try_from(w: BlockSystemWire<T>) -> Result<Self> {
        let n = match (w.n, infer_dim(&w.a, &w.b)?) {
            (Some(n), _) | (None, Some(n)) => n,
            (None, None) => {
                return Err(Error::InvalidSpec(
                    "block system needs \"n\" when neither operator fixes a dimension".into(),
                ))
            }
        };
        Self::new(w.a, w.b, w.tau, n)
    }
}

impl<T: Real> From<BlockSystem<T>> for BlockSystemWire<T> {
    fn from(s: BlockSystem<T>) -> Self {
        let n = match infer_dim(&s.a, &s.b) {
            Ok(Some(_)) => None,
            _ => Some(s.n),
        };
        Self {
            a: s.a,
            b: s.b,
            tau: s.tau,
            n,
        }
    }
}

/// The elimination blocks `R₁ = 𝓛⁻¹𝓚₀ᵀR₂` and `R₂ = (𝓚₀𝓛⁻¹𝓚₀ᵀ)⁻¹/√τ`, with the
/// unscaled coupling `𝓚₀ = [I I]`, that solve `𝒜[R₁; R₂] = 𝒟` for the lifted
/// operator `𝒜 = [[𝓛, −𝓚₀ᵀ], [𝓚₀, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationPair<T: Real> {
    pub r1: DMatrix<T>,
    pub r2: DMatrix<T>,
}

impl<T: Real> BlockSystem<T> {
    pub fn new(a: OperatorSpec<T>, b: OperatorSpec<T>, tau: T, n: usize) -> Result<Self> {
        if !(tau > T::zero() && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau must be positive, got {tau}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        a.check_dim(n)?;
        b.check_dim(n)?;
        Ok(Self {
            a,
            b,
            tau,
            sqrt_tau: tau.sqrt(),
            n,
        })
    }

    pub fn a(&self) -> &OperatorSpec<T> {
        &self.a
    }

    pub fn b(&self) -> &OperatorSpec<T> {
        &self.b
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn sqrt_tau(&self) -> T {
        self.sqrt_tau
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_point(&self, v: &DVector<T>) -> Result<()> {
        if v.len() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            })
        }
    }

    /// `(I + 𝓚𝓛⁻¹𝓚ᵀ)⁻¹ v` through one splitting step on `z = √τ·v`.
    /// Works for every operator in the catalog.
    pub fn reduced_resolvent_via_drs(&self, v: &DVector<T>) -> Result<DVector<T>> {
        self.check_point(v)?;
        let z = v * self.sqrt_tau;
        let next = drs_map(&self.a, &self.b, self.tau, &z)?;
        Ok(next / self.sqrt_tau)
    }

    fn inverse_block(&self, which: &'static str) -> Result<DMatrix<T>> {
        let op = if which == "A" { &self.a } else { &self.b };
        let m = op
            .linear_matrix(self.n)
            .ok_or(Error::NonLinearBlock(which))?;
        linalg::inverse(&m).ok_or(Error::NonInvertibleBlock(which))
    }

    /// `𝓛 = [[B⁻¹, −τI], [τI, A⁻¹]]`; needs linear `A`, `B` with matrix inverses.
    pub fn l_matrix(&self) -> Result<DMatrix<T>> {
        let b_inv = self.inverse_block("B")?;
        let a_inv = self.inverse_block("A")?;
        let eye = DMatrix::<T>::identity(self.n, self.n) * self.tau;
        Ok(linalg::block2(&b_inv, &(-&eye), &eye, &a_inv))
    }

    /// `𝓚 = √τ·[I I]`, an `n × 2n` surjection.
    pub fn k_matrix(&self) -> DMatrix<T> {
        let n = self.n;
        let mut k = DMatrix::zeros(n, 2 * n);
        for i in 0..n {
            k[(i, i)] = self.sqrt_tau;
            k[(i, n + i)] = self.sqrt_tau;
        }
        k
    }

    /// `𝓚𝓛⁻¹𝓚ᵀ`, the operator whose resolvent is the splitting map.
    pub fn reduced_operator_matrix(&self) -> Result<DMatrix<T>> {
        let l = self.l_matrix()?;
        let k = self.k_matrix();
        let l_inv_kt = linalg::solve_matrix(&l, &k.transpose())?;
        Ok(&k * l_inv_kt)
    }

    /// Solves `(I + 𝓚𝓛⁻¹𝓚ᵀ)v⁺ = v` with dense factorizations.
    pub fn reduced_resolvent_direct(&self, v: &DVector<T>) -> Result<DVector<T>> {
        self.check_point(v)?;
        let g = self.reduced_operator_matrix()?;
        linalg::solve(&(DMatrix::identity(self.n, self.n) + g), v)
    }

    /// `v − 𝓚(𝓛 + 𝓚ᵀ𝓚)⁻¹𝓚ᵀv`.
    ///
    /// `𝓚ᵀ𝓚 = τ[[I, I], [I, I]]` is singular, yet `𝓛 + 𝓚ᵀ𝓚` is invertible
    /// whenever `𝓛` is, so the formula still yields the same resolvent.
    pub fn reduced_resolvent_fukushima(&self, v: &DVector<T>) -> Result<DVector<T>> {
        self.check_point(v)?;
        let l = self.l_matrix()?;
        let k = self.k_matrix();
        let kt = k.transpose();
        let w = linalg::solve(&(l + &kt * &k), &(&kt * v))?;
        Ok(v - k * w)
    }

    /// `J_{𝓛▷𝓚}(v) = v − (I + 𝓚𝓛⁻¹𝓚ᵀ)⁻¹ v`, the Moreau complement of the reduced resolvent.
    pub fn moreau_complement_form(&self, v: &DVector<T>) -> Result<DVector<T>> {
        Ok(v - self.reduced_resolvent_via_drs(v)?)
    }

    pub fn elimination_pair(&self) -> Result<EliminationPair<T>> {
        let l = self.l_matrix()?;
        let k0 = self.k_matrix() / self.sqrt_tau;
        let k0t = k0.transpose();
        let l_inv_k0t = linalg::solve_matrix(&l, &k0t)?;
        let schur = &k0 * &l_inv_k0t;
        let rhs = DMatrix::<T>::identity(self.n, self.n) / self.sqrt_tau;
        let r2 = linalg::solve_matrix(&schur, &rhs)?;
        let r1 = l_inv_k0t * &r2;
        Ok(EliminationPair { r1, r2 })
    }

    /// Residuals `‖𝓛R₁ − 𝓚₀ᵀR₂‖` and `‖𝓚₀R₁ − I/√τ‖`.
    pub fn elimination_residuals(&self, pair: &EliminationPair<T>) -> Result<(T, T)> {
        let l = self.l_matrix()?;
        let k0 = self.k_matrix() / self.sqrt_tau;
        let first = (&l * &pair.r1 - k0.transpose() * &pair.r2).norm();
        let target = DMatrix::<T>::identity(self.n, self.n) / self.sqrt_tau;
        let second = (k0 * &pair.r1 - target).norm();
        Ok((first, second))
    }
}

/// `P M Pᵀ`, the congruence that carries monotone operators on `ℝᵐ` to `ℝⁿ`.
pub fn congruence<T: Real>(p: &DMatrix<T>, m: &DMatrix<T>) -> Result<DMatrix<T>> {
    if p.ncols() != m.nrows() || !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: p.ncols(),
            found: m.nrows(),
        });
    }
    Ok(p * m * p.transpose())
}

/// Assembles `[[A, −Cᵀ], [C, B]]` for linear `A`, `B`.
pub fn monotone_skew_matrix<T: Real>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    c: &DMatrix<T>,
) -> Result<DMatrix<T>> {
    if c.shape() != (b.nrows(), a.ncols()) || !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch {
            expected: b.nrows() * a.ncols(),
            found: c.nrows() * c.ncols(),
        });
    }
    Ok(linalg::block2(a, &(-c.transpose()), c, b))
}
