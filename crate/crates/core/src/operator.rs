//! A closed catalog of maximally monotone operators on `ℝⁿ` whose resolvents
//! can be evaluated exactly, either in closed form or with one dense solve.
//!
//! The resolvent of `S` with step `τ > 0` is `J_{τS} = (I + τS)⁻¹`; for every
//! variant below it is single-valued and defined on all of `ℝⁿ`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::OperatorWire;
use crate::linalg;
use crate::scalar::Real;

/// Convex functions whose subdifferential has a closed-form resolvent.
#[derive(Debug, Clone, PartialEq)]
pub enum ProxKind<T> {
    /// `f(x) = ½ xᵀQx + qᵀx` with `Q` symmetric positive semidefinite.
    Quadratic {
        hessian: DMatrix<T>,
        linear: DVector<T>,
    },
    /// `f(x) = weight · ‖x‖₁`.
    L1 { weight: T },
    /// Indicator of the box `lo ≤ x ≤ hi`.
    IndicatorBox { lo: DVector<T>, hi: DVector<T> },
    /// Indicator of the affine set `{x : Ex = e}`; `E` has full row rank.
    IndicatorAffine {
        constraint: DMatrix<T>,
        rhs: DVector<T>,
    },
}

/// A representable maximally monotone operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "OperatorWire<T>",
    into = "OperatorWire<T>",
    bound(serialize = "T: Real", deserialize = "T: Real")
)]
pub enum OperatorSpec<T: Real> {
    Zero,
    ScaledIdentity {
        alpha: T,
    },
    LinearRelation {
        matrix: DMatrix<T>,
    },
    ProxFunction(ProxKind<T>),
    Inverse(Box<OperatorSpec<T>>),
    /// `S = [[A, −Cᵀ], [C, B]]` acting on `ℝ^{n₁} × ℝ^{n₂}`, with `C` of shape `n₂ × n₁`.
    Block2x2 {
        a: Box<OperatorSpec<T>>,
        b: Box<OperatorSpec<T>>,
        coupling: DMatrix<T>,
    },
}

fn check_tau<T: Real>(tau: T) -> Result<()> {
    if tau > T::zero() && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "step size must be positive and finite, got {tau}"
        )))
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn soft_threshold<T: Real>(v: T, kappa: T) -> T {
    if v > kappa {
        v - kappa
    } else if v < -kappa {
        v + kappa
    } else {
        T::zero()
    }
}

impl<T: Real> OperatorSpec<T> {
    pub fn zero() -> Self {
        Self::Zero
    }

    pub fn scaled_identity(alpha: T) -> Result<Self> {
        let op = Self::ScaledIdentity { alpha };
        op.validate()?;
        Ok(op)
    }

    pub fn linear(matrix: DMatrix<T>) -> Result<Self> {
        let op = Self::LinearRelation { matrix };
        op.validate()?;
        Ok(op)
    }

    pub fn quadratic(hessian: DMatrix<T>, linear: DVector<T>) -> Result<Self> {
        let op = Self::ProxFunction(ProxKind::Quadratic { hessian, linear });
        op.validate()?;
        Ok(op)
    }

    pub fn l1(weight: T) -> Result<Self> {
        let op = Self::ProxFunction(ProxKind::L1 { weight });
        op.validate()?;
        Ok(op)
    }

    pub fn indicator_box(lo: DVector<T>, hi: DVector<T>) -> Result<Self> {
        let op = Self::ProxFunction(ProxKind::IndicatorBox { lo, hi });
        op.validate()?;
        Ok(op)
    }

    pub fn indicator_affine(constraint: DMatrix<T>, rhs: DVector<T>) -> Result<Self> {
        let op = Self::ProxFunction(ProxKind::IndicatorAffine { constraint, rhs });
        op.validate()?;
        Ok(op)
    }

    pub fn inverse(inner: Self) -> Self {
        Self::Inverse(Box::new(inner))
    }

    pub fn block2x2(a: Self, b: Self, coupling: DMatrix<T>) -> Result<Self> {
        let op = Self::Block2x2 {
            a: Box::new(a),
            b: Box::new(b),
            coupling,
        };
        op.validate()?;
        Ok(op)
    }

    /// Checks every construction invariant, recursively.
    pub fn validate(&self) -> Result<()> {
        let tol = T::tolerances();
        match self {
            Self::Zero => Ok(()),
            Self::ScaledIdentity { alpha } => {
                if *alpha >= T::zero() && alpha.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(format!(
                        "scaled identity needs alpha >= 0, got {alpha}"
                    )))
                }
            }
            Self::LinearRelation { matrix } => {
                if !matrix.is_square() || matrix.nrows() == 0 {
                    return Err(Error::InvalidSpec(format!(
                        "linear relation needs a non-empty square matrix, got {}x{}",
                        matrix.nrows(),
                        matrix.ncols()
                    )));
                }
                check_finite(matrix.iter())?;
                if !linalg::is_monotone_matrix(matrix, tol.psd) {
                    let (min, _) = linalg::sym_spectrum_bounds(matrix);
                    return Err(Error::InvalidSpec(format!(
                        "linear relation is not monotone: symmetric part has eigenvalue {min:e}"
                    )));
                }
                Ok(())
            }
            Self::ProxFunction(kind) => kind.validate(),
            Self::Inverse(inner) => inner.validate(),
            Self::Block2x2 { a, b, coupling } => {
                a.validate()?;
                b.validate()?;
                let (n2, n1) = coupling.shape();
                if n1 == 0 || n2 == 0 {
                    return Err(Error::InvalidSpec("empty coupling matrix".into()));
                }
                check_finite(coupling.iter())?;
                if let Some(d) = a.dim() {
                    check_len(n1, d)?;
                }
                if let Some(d) = b.dim() {
                    check_len(n2, d)?;
                }
                Ok(())
            }
        }
    }

    /// Intrinsic dimension, or `None` for variants that act on any `ℝⁿ`.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Zero | Self::ScaledIdentity { .. } => None,
            Self::LinearRelation { matrix } => Some(matrix.nrows()),
            Self::ProxFunction(kind) => kind.dim(),
            Self::Inverse(inner) => inner.dim(),
            Self::Block2x2 { coupling, .. } => Some(coupling.nrows() + coupling.ncols()),
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.dim() {
            Some(d) => check_len(d, n),
            None => Ok(()),
        }
    }

    /// Returns the unique `p` with `x ∈ p + τ·S(p)`.
    pub fn resolve(&self, tau: T, x: &DVector<T>) -> Result<DVector<T>> {
        check_tau(tau)?;
        self.check_dim(x.len())?;
        self.resolve_unchecked(tau, x)
    }

    fn resolve_unchecked(&self, tau: T, x: &DVector<T>) -> Result<DVector<T>> {
        match self {
            Self::Zero => Ok(x.clone()),
            Self::ScaledIdentity { alpha } => Ok(x / (T::one() + tau * *alpha)),
            Self::LinearRelation { matrix } => {
                let n = matrix.nrows();
                linalg::solve(&(DMatrix::identity(n, n) + matrix * tau), x)
            }
            Self::ProxFunction(kind) => kind.prox(tau, x),
            Self::Inverse(inner) => inner.resolve_of_inverse(tau, x),
            Self::Block2x2 { a, b, coupling } => {
                let (n2, n1) = coupling.shape();
                if linalg::is_zero(coupling) {
                    let (x1, x2) = linalg::split(x, n1);
                    let p1 = a.resolve_unchecked(tau, &x1)?;
                    let p2 = b.resolve_unchecked(tau, &x2)?;
                    return Ok(linalg::concat(&p1, &p2));
                }
                let (s, offset) = self
                    .affine_form(n1 + n2)
                    .ok_or(Error::UnsupportedComposition)?;
                let n = n1 + n2;
                linalg::solve(&(DMatrix::identity(n, n) + s * tau), &(x - offset * tau))
            }
        }
    }

    /// Resolvent of `S⁻¹` through the scaled Moreau identity
    /// `J_{τS⁻¹}(x) = x − τ·J_{S/τ}(x/τ)`.
    fn resolve_of_inverse(&self, tau: T, x: &DVector<T>) -> Result<DVector<T>> {
        let inner = self.resolve_unchecked(T::one() / tau, &(x / tau))?;
        Ok(x - inner * tau)
    }

    /// `(M, c)` with `S(x) = Mx + c` when the operator is single-valued affine on `ℝ^dim`.
    pub fn affine_form(&self, dim: usize) -> Option<(DMatrix<T>, DVector<T>)> {
        if self.check_dim(dim).is_err() {
            return None;
        }
        match self {
            Self::Zero => Some((DMatrix::zeros(dim, dim), DVector::zeros(dim))),
            Self::ScaledIdentity { alpha } => {
                Some((DMatrix::identity(dim, dim) * *alpha, DVector::zeros(dim)))
            }
            Self::LinearRelation { matrix } => Some((matrix.clone(), DVector::zeros(dim))),
            Self::ProxFunction(ProxKind::Quadratic { hessian, linear }) => {
                Some((hessian.clone(), linear.clone()))
            }
            Self::ProxFunction(_) => None,
            Self::Inverse(inner) => {
                let (m, c) = inner.affine_form(dim)?;
                let inv = linalg::inverse(&m)?;
                let offset = -(&inv * c);
                Some((inv, offset))
            }
            Self::Block2x2 { a, b, coupling } => {
                let (n2, n1) = coupling.shape();
                let (ma, ca) = a.affine_form(n1)?;
                let (mb, cb) = b.affine_form(n2)?;
                let s = linalg::block2(&ma, &(-coupling.transpose()), coupling, &mb);
                Some((s, linalg::concat(&ca, &cb)))
            }
        }
    }

    /// The matrix `M` with `S = M` when the operator is linear on `ℝ^dim`.
    pub fn linear_matrix(&self, dim: usize) -> Option<DMatrix<T>> {
        let (m, c) = self.affine_form(dim)?;
        c.iter().all(|v| *v == T::zero()).then_some(m)
    }

    /// Distance-like residual of the inclusion `u ∈ S(y)`; zero exactly on the graph.
    ///
    /// Linear relations are checked directly as `‖u − My‖`, inverses swap the
    /// roles of `y` and `u`, and everything else uses `‖y − J_S(y + u)‖`.
    pub fn graph_residual(&self, y: &DVector<T>, u: &DVector<T>) -> Result<T> {
        check_len(y.len(), u.len())?;
        self.check_dim(y.len())?;
        match self {
            Self::LinearRelation { matrix } => Ok((u - matrix * y).norm()),
            Self::Inverse(inner) => inner.graph_residual(u, y),
            _ => {
                let p = self.resolve_unchecked(T::one(), &(y + u))?;
                Ok((y - p).norm())
            }
        }
    }

    pub fn graph_member(&self, y: &DVector<T>, u: &DVector<T>, tol: T) -> Result<bool> {
        Ok(self.graph_residual(y, u)? <= tol)
    }

    /// `‖J_{τS}(x) + τ·J_{S⁻¹/τ}(x/τ) − x‖`, which vanishes for every maximally monotone `S`.
    pub fn moreau_residual(&self, tau: T, x: &DVector<T>) -> Result<T> {
        let p = self.resolve(tau, x)?;
        let inv_tau = T::one() / tau;
        let q = self.resolve_of_inverse(inv_tau, &(x * inv_tau))?;
        Ok((p + q * tau - x).norm())
    }
}

impl<T: Real> ProxKind<T> {
    fn dim(&self) -> Option<usize> {
        match self {
            Self::Quadratic { linear, .. } => Some(linear.len()),
            Self::L1 { .. } => None,
            Self::IndicatorBox { lo, .. } => Some(lo.len()),
            Self::IndicatorAffine { constraint, .. } => Some(constraint.ncols()),
        }
    }

    fn validate(&self) -> Result<()> {
        let tol = T::tolerances();
        match self {
            Self::Quadratic { hessian, linear } => {
                if !hessian.is_square() || hessian.nrows() != linear.len() || linear.is_empty() {
                    return Err(Error::InvalidSpec(format!(
                        "quadratic needs an n x n hessian and length-n linear term, got {}x{} and {}",
                        hessian.nrows(),
                        hessian.ncols(),
                        linear.len()
                    )));
                }
                check_finite(hessian.iter().chain(linear.iter()))?;
                if !linalg::is_symmetric(hessian, tol.symmetry) {
                    return Err(Error::InvalidSpec(
                        "quadratic hessian is not symmetric".into(),
                    ));
                }
                if !linalg::is_monotone_matrix(hessian, tol.psd) {
                    return Err(Error::InvalidSpec(
                        "quadratic hessian is not positive semidefinite".into(),
                    ));
                }
                Ok(())
            }
            Self::L1 { weight } => {
                if *weight > T::zero() && weight.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(format!(
                        "l1 weight must be positive, got {weight}"
                    )))
                }
            }
            Self::IndicatorBox { lo, hi } => {
                check_len(lo.len(), hi.len())?;
                if lo.is_empty() {
                    return Err(Error::InvalidSpec("empty box".into()));
                }
                check_finite(lo.iter().chain(hi.iter()))?;
                if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
                    return Err(Error::InvalidSpec(
                        "box needs lo <= hi componentwise".into(),
                    ));
                }
                Ok(())
            }
            Self::IndicatorAffine { constraint, rhs } => {
                check_len(constraint.nrows(), rhs.len())?;
                if constraint.is_empty() {
                    return Err(Error::InvalidSpec("empty affine constraint".into()));
                }
                check_finite(constraint.iter().chain(rhs.iter()))?;
                if linalg::rank(constraint, T::lit(1e-8).max(tol.psd)) < constraint.nrows() {
                    return Err(Error::InvalidSpec(
                        "affine constraint matrix must have full row rank".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    fn prox(&self, tau: T, x: &DVector<T>) -> Result<DVector<T>> {
        match self {
            Self::Quadratic { hessian, linear } => {
                let n = hessian.nrows();
                linalg::solve(
                    &(DMatrix::identity(n, n) + hessian * tau),
                    &(x - linear * tau),
                )
            }
            Self::L1 { weight } => {
                let kappa = tau * *weight;
                Ok(x.map(|v| soft_threshold(v, kappa)))
            }
            Self::IndicatorBox { lo, hi } => Ok(DVector::from_iterator(
                x.len(),
                x.iter()
                    .zip(lo.iter().zip(hi.iter()))
                    .map(|(v, (l, h))| v.max(*l).min(*h)),
            )),
            Self::IndicatorAffine { constraint, rhs } => {
                let gram = constraint * constraint.transpose();
                let mult = linalg::solve(&gram, &(constraint * x - rhs))?;
                Ok(x - constraint.transpose() * mult)
            }
        }
    }
}

fn check_finite<'a, T: Real>(mut values: impl Iterator<Item = &'a T>) -> Result<()> {
    if values.all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidSpec("non-finite entry".into()))
    }
}

/// A single resolvent evaluation request.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventQuery<T: Real> {
    op: OperatorSpec<T>,
    tau: T,
    point: DVector<T>,
}

impl<T: Real> ResolventQuery<T> {
    pub fn new(op: OperatorSpec<T>, tau: T, point: DVector<T>) -> Result<Self> {
        check_tau(tau)?;
        op.check_dim(point.len())?;
        Ok(Self { op, tau, point })
    }

    pub fn op(&self) -> &OperatorSpec<T> {
        &self.op
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn point(&self) -> &DVector<T> {
        &self.point
    }

    pub fn evaluate(&self) -> Result<DVector<T>> {
        self.op.resolve(self.tau, &self.point)
    }
}
