//! The splitting iteration lifted to a degenerate proximal point method on
//! `b = (u, s, z) ∈ ℝⁿ × ℝⁿ × ℝⁿ`:
//!
//! ```text
//! 0 ∈ 𝒜b⁺ + 𝒬(b⁺ − b),   𝒜 = [[B⁻¹, −τI, −I], [τI, A⁻¹, −I], [I, I, 0]],
//!                         𝒬 = blockdiag(0, 0, I/τ) = 𝒟𝒟ᵀ,  𝒟 = (0, 0, I/√τ).
//! ```
//!
//! `𝒬` only sees `z`, so `u` and `s` are recomputed from scratch every step
//! and the reduction `v = 𝒟ᵀb = z/√τ` recovers the splitting map.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::block::BlockSystem;
use crate::error::{Error, Result};
use crate::json;
use crate::linalg;
use crate::operator::OperatorSpec;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PpaState<T: Real> {
    #[serde(with = "json::vector")]
    pub u: DVector<T>,
    #[serde(with = "json::vector")]
    pub s: DVector<T>,
    #[serde(with = "json::vector")]
    pub z: DVector<T>,
}

impl<T: Real> PpaState<T> {
    /// State with `u = s = 0`.
    pub fn from_z(z: DVector<T>) -> Self {
        let n = z.len();
        Self {
            u: DVector::zeros(n),
            s: DVector::zeros(n),
            z,
        }
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    fn check(&self, n: usize) -> Result<()> {
        for len in [self.u.len(), self.s.len(), self.z.len()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        Ok(())
    }

    pub fn stacked(&self) -> DVector<T> {
        linalg::concat(&linalg::concat(&self.u, &self.s), &self.z)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PpaSystem<T: Real> {
    a: OperatorSpec<T>,
    b: OperatorSpec<T>,
    a_inv: OperatorSpec<T>,
    b_inv: OperatorSpec<T>,
    tau: T,
    sqrt_tau: T,
    n: usize,
}

impl<T: Real> PpaSystem<T> {
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
            a_inv: OperatorSpec::inverse(a.clone()),
            b_inv: OperatorSpec::inverse(b.clone()),
            a,
            b,
            tau,
            sqrt_tau: tau.sqrt(),
            n,
        })
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_system(&self) -> BlockSystem<T> {
        BlockSystem::new(self.a.clone(), self.b.clone(), self.tau, self.n)
            .expect("validated at construction")
    }

    /// One lifted step:
    /// `u⁺ = J_{B⁻¹/τ}(z/τ)`, `s⁺ = J_{A⁻¹/τ}(z/τ − 2u⁺)`, `z⁺ = z − τ(s⁺ + u⁺)`.
    /// The incoming `u` and `s` are never read.
    pub fn step(&self, state: &PpaState<T>) -> Result<PpaState<T>> {
        state.check(self.n)?;
        let inv_tau = T::one() / self.tau;
        let scaled = &state.z * inv_tau;
        let u = self.b_inv.resolve(inv_tau, &scaled)?;
        let s = self.a_inv.resolve(inv_tau, &(scaled - &u * T::lit(2.0)))?;
        let z = &state.z - (&s + &u) * self.tau;
        Ok(PpaState { u, s, z })
    }

    /// Largest row residual of `0 ∈ 𝒜b⁺ + 𝒬(b⁺ − b)`:
    /// `u⁺ ∈ B(z − τu⁺)`, `s⁺ ∈ A(z − 2τu⁺ − τs⁺)` and `z⁺ = z − τ(u⁺ + s⁺)`.
    pub fn inclusion_residual(&self, prev: &PpaState<T>, next: &PpaState<T>) -> Result<T> {
        prev.check(self.n)?;
        next.check(self.n)?;
        let tau = self.tau;
        let x = &prev.z - &next.u * tau;
        let row1 = self.b.graph_residual(&x, &next.u)?;
        let w = &x - (&next.u + &next.s) * tau;
        let row2 = self.a.graph_residual(&w, &next.s)?;
        let row3 = (&next.z - (&prev.z - (&next.u + &next.s) * tau)).norm();
        Ok(row1.max(row2).max(row3))
    }

    /// `v = 𝒟ᵀb = z/√τ`.
    pub fn reduce(&self, state: &PpaState<T>) -> DVector<T> {
        &state.z / self.sqrt_tau
    }

    /// `𝒬 = blockdiag(0, 0, I/τ)`, assembled.
    pub fn metric_matrix(&self) -> DMatrix<T> {
        let n = self.n;
        let mut q = DMatrix::zeros(3 * n, 3 * n);
        for i in 0..n {
            q[(2 * n + i, 2 * n + i)] = T::one() / self.tau;
        }
        q
    }

    /// `𝒟 = (0, 0, I/√τ)` as a `3n × n` matrix.
    pub fn metric_factor(&self) -> DMatrix<T> {
        let n = self.n;
        let mut d = DMatrix::zeros(3 * n, n);
        for i in 0..n {
            d[(2 * n + i, i)] = T::one() / self.sqrt_tau;
        }
        d
    }

    /// The `3n × 3n` matrix of `𝒜`; needs linear `A`, `B` with matrix inverses.
    pub fn lifted_operator_matrix(&self) -> Result<DMatrix<T>> {
        let n = self.n;
        let l = self.block_system().l_matrix()?;
        let mut m = DMatrix::zeros(3 * n, 3 * n);
        m.view_mut((0, 0), (2 * n, 2 * n)).copy_from(&l);
        for i in 0..n {
            m[(i, 2 * n + i)] = -T::one();
            m[(n + i, 2 * n + i)] = -T::one();
            m[(2 * n + i, i)] = T::one();
            m[(2 * n + i, n + i)] = T::one();
        }
        Ok(m)
    }

    /// `𝒟ᵀ(𝒜 + 𝒟𝒟ᵀ)⁻¹𝒟`, the matrix of the reduced iteration on `v`.
    pub fn reduced_iteration_matrix(&self) -> Result<DMatrix<T>> {
        let lifted = self.lifted_operator_matrix()? + self.metric_matrix();
        let d = self.metric_factor();
        let sol = linalg::solve_matrix(&lifted, &d)?;
        Ok(d.transpose() * sol)
    }
}
