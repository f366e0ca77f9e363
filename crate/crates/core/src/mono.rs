//! Certification and falsification of (cyclic) monotonicity, and the
//! proximal-mapping test for linear resolvents.
//!
//! A resolvent `T = (I + S)⁻¹` is a proximal mapping exactly when `S` is
//! maximally cyclically monotone. For linear `S` this reduces to symmetry of
//! `S = T⁻¹ − I`, a finite check. For everything else only falsification is
//! possible: find points on the graph whose cycle sum
//! `Σᵢ ⟨xᵢ₊₁ − xᵢ, uᵢ⟩` (indices mod n) is positive.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::drs::DrsProblem;
use crate::error::{Error, Result};
use crate::json;
use crate::linalg;
use crate::operator::OperatorSpec;
use crate::sampling;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CycleWitness<T: Real> {
    pub points: Vec<DVector<T>>,
    pub values: Vec<DVector<T>>,
    pub cycle_sum: T,
    /// Closed-form cycle sum of the skew three-cycle construction.
    pub xi: Option<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct CycleWitnessWire<T: Real> {
    n: usize,
    #[serde(with = "json::vector_list")]
    points: Vec<DVector<T>>,
    #[serde(with = "json::vector_list")]
    values: Vec<DVector<T>>,
    cycle_sum: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xi: Option<T>,
}

impl<T: Real> Serialize for CycleWitness<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycleWitnessWire {
            n: self.points.len(),
            points: self.points.clone(),
            values: self.values.clone(),
            cycle_sum: self.cycle_sum,
            xi: self.xi,
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for CycleWitness<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = CycleWitnessWire::<T>::deserialize(d)?;
        if w.n != w.points.len() || w.points.len() != w.values.len() {
            return Err(D::Error::custom("witness length fields disagree"));
        }
        Ok(Self {
            points: w.points,
            values: w.values,
            cycle_sum: w.cycle_sum,
            xi: w.xi,
        })
    }
}

impl<T: Real> CycleWitness<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when the cycle sum exceeds the violation threshold.
    pub fn certifies_violation(&self) -> bool {
        self.cycle_sum > T::tolerances().cycle_violation
    }
}

/// `Σᵢ ⟨xᵢ₊₁ − xᵢ, uᵢ⟩` with `x_{n+1} = x₁`.
pub fn cycle_sum<T: Real>(points: &[DVector<T>], values: &[DVector<T>]) -> Result<T> {
    if points.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: points.len(),
            right: values.len(),
        });
    }
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "a cycle needs at least two points, got {n}"
        )));
    }
    let dim = points[0].len();
    for v in points.iter().chain(values) {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    Ok((0..n).fold(T::zero(), |acc, i| {
        let next = &points[(i + 1) % n];
        acc + (next - &points[i]).dot(&values[i])
    }))
}

/// Three graph points of `S = [[0, −Cᵀ], [C, 0]]` whose cycle sum is
/// `ξ = ‖Ca₁‖² + ‖CᵀCa₁‖² + ‖Cᵀb₁‖² + ‖CCᵀb₁‖²`:
/// `x₁ = (a₁, b₁)`, `x₂ = (−Cᵀb₁, Ca₁)`, `x₃ = (−CᵀCa₁, −CCᵀb₁)`, `uᵢ = Sxᵢ`.
pub fn skew_three_cycle<T: Real>(
    coupling: &DMatrix<T>,
    a1: &DVector<T>,
    b1: &DVector<T>,
) -> Result<CycleWitness<T>> {
    if linalg::is_zero(coupling) {
        return Err(Error::ZeroCoupling);
    }
    let (n2, n1) = coupling.shape();
    if a1.len() != n1 {
        return Err(Error::DimensionMismatch {
            expected: n1,
            found: a1.len(),
        });
    }
    if b1.len() != n2 {
        return Err(Error::DimensionMismatch {
            expected: n2,
            found: b1.len(),
        });
    }
    let ct = coupling.transpose();
    let ca1 = coupling * a1;
    let ctb1 = &ct * b1;
    let ctca1 = &ct * &ca1;
    let cctb1 = coupling * &ctb1;
    let pairs = [
        (a1.clone(), b1.clone()),
        (-&ctb1, ca1.clone()),
        (-&ctca1, -&cctb1),
    ];
    let points: Vec<_> = pairs.iter().map(|(a, b)| linalg::concat(a, b)).collect();
    let values: Vec<_> = pairs
        .iter()
        .map(|(a, b)| linalg::concat(&(-(&ct * b)), &(coupling * a)))
        .collect();
    let xi = ca1.norm_squared() + ctca1.norm_squared() + ctb1.norm_squared() + cctb1.norm_squared();
    let sum = cycle_sum(&points, &values)?;
    Ok(CycleWitness {
        points,
        values,
        cycle_sum: sum,
        xi: Some(xi),
    })
}

/// The skew three-cycle with Gaussian `a₁`, `b₁` drawn from `seed`, redrawing
/// `a₁` until `‖Ca₁‖ > 0`.
pub fn seeded_skew_three_cycle<T: Real>(
    coupling: &DMatrix<T>,
    seed: u64,
) -> Result<CycleWitness<T>> {
    if linalg::is_zero(coupling) {
        return Err(Error::ZeroCoupling);
    }
    let (n2, n1) = coupling.shape();
    let mut rng = sampling::seeded_rng(seed);
    let a1 = loop {
        let a: DVector<T> = sampling::gaussian_vector(&mut rng, n1);
        if (coupling * &a).norm() > T::zero() {
            break a;
        }
    };
    let b1 = sampling::gaussian_vector(&mut rng, n2);
    skew_three_cycle(coupling, &a1, &b1)
}

/// Searches cycle lengths `2..=n_max`, `trials` random cycles each, for a
/// cyclic-monotonicity violation of `op`. Graph points are drawn as
/// `(p, w − p)` with `p = J_op(w)` and `w` standard Gaussian. Returns the
/// first violation in `(n, trial)` order.
///
/// Operators without an intrinsic dimension are sampled in `ℝ²`; use
/// [`sample_cycles_in`] to choose another dimension.
pub fn sample_cycles<T: Real>(
    op: &OperatorSpec<T>,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<Option<CycleWitness<T>>> {
    sample_cycles_in(op, op.dim().unwrap_or(2), n_max, trials, seed)
}

pub fn sample_cycles_in<T: Real>(
    op: &OperatorSpec<T>,
    dim: usize,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<Option<CycleWitness<T>>> {
    op.check_dim(dim)?;
    if n_max < 2 {
        return Err(Error::InvalidParameter(format!(
            "n_max must be at least 2, got {n_max}"
        )));
    }
    let graph_point = |w: DVector<T>| -> Result<(DVector<T>, DVector<T>)> {
        let p = op.resolve(T::one(), &w).map_err(|e| match e {
            Error::UnsupportedComposition | Error::SingularSystem => {
                Error::UnsupportedSampling(e.to_string())
            }
            other => other,
        })?;
        let u = w - &p;
        Ok((p, u))
    };
    // Fail early, before any trial, for operators we cannot resolve.
    graph_point(DVector::zeros(dim))?;

    let threshold = T::tolerances().cycle_violation;
    for n in 2..=n_max {
        let mut rng = sampling::substream(seed, n as u64);
        for _ in 0..trials {
            let mut points = Vec::with_capacity(n);
            let mut values = Vec::with_capacity(n);
            for _ in 0..n {
                let (p, u) = graph_point(sampling::gaussian_vector(&mut rng, dim))?;
                points.push(p);
                values.push(u);
            }
            let sum = cycle_sum(&points, &values)?;
            if sum > threshold {
                return Ok(Some(CycleWitness {
                    points,
                    values,
                    cycle_sum: sum,
                    xi: None,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Proximal,
    NotProximal,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ResolventClassification<T: Real> {
    /// `M = T⁻¹ − I`.
    #[serde(rename = "recovered_M", with = "json::matrix")]
    pub recovered_m: DMatrix<T>,
    /// `‖M − Mᵀ‖_F / max(1, ‖M‖_F)`.
    pub symmetry_defect: T,
    /// Smallest eigenvalue of `(M + Mᵀ)/2`.
    pub min_sym_eigenvalue: T,
    pub verdict: Verdict,
}

/// Recovers `M = T⁻¹ − I` from a linear resolvent `T` and decides whether `T`
/// is a proximal mapping, i.e. whether `M` is symmetric. One-dimensional
/// resolvents are always proximal.
pub fn classify_resolvent<T: Real>(t: &DMatrix<T>) -> Result<ResolventClassification<T>> {
    if !t.is_square() || t.nrows() == 0 {
        return Err(Error::InvalidParameter(format!(
            "resolvent matrix must be square and non-empty, got {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    let tol = T::tolerances();
    let n = t.nrows();
    let t_inv = linalg::inverse(t).ok_or(Error::SingularMatrix)?;
    let m = t_inv - DMatrix::identity(n, n);
    let (min_eig, max_abs) = linalg::sym_spectrum_bounds(&m);
    if min_eig < -tol.proximal * max_abs.max(T::one()) {
        return Err(Error::NonMonotone {
            min_eigenvalue: min_eig.as_f64(),
        });
    }
    let defect = linalg::symmetry_defect(&m);
    let verdict = if n == 1 || defect <= tol.proximal {
        Verdict::Proximal
    } else if defect > tol.not_proximal {
        Verdict::NotProximal
    } else {
        Verdict::Inconclusive
    };
    Ok(ResolventClassification {
        recovered_m: m,
        symmetry_defect: defect,
        min_sym_eigenvalue: min_eig,
        verdict,
    })
}

/// Materializes the splitting map as a matrix, column `j` being the image of
/// `e_j`, and rejects it unless it reproduces the map on the origin and on ten
/// seeded Gaussian probes.
pub fn drs_map_matrix<T: Real>(p: &DrsProblem<T>) -> Result<DMatrix<T>> {
    let n = p.dim();
    let mut t = DMatrix::zeros(n, n);
    for j in 0..n {
        let e = DVector::from_fn(n, |i, _| if i == j { T::one() } else { T::zero() });
        t.set_column(j, &p.step(&e)?);
    }
    let tol = T::tolerances().linearity;
    let mut rng = sampling::substream(p.seed(), 0x11ea);
    let mut worst = T::zero();
    let probes = std::iter::once(DVector::zeros(n))
        .chain((0..10).map(|_| sampling::gaussian_vector::<T, _>(&mut rng, n) * T::lit(3.0)));
    for x in probes {
        let image = p.step(&x)?;
        let predicted = &t * &x;
        let scale = T::one().max(x.norm()).max(image.norm());
        worst = worst.max((image - predicted).norm() / scale);
    }
    if worst > tol {
        return Err(Error::NotLinear {
            residual: worst.as_f64(),
        });
    }
    Ok(t)
}

/// For symmetric positive definite `M`, checks that `M⁻¹` is again symmetric
/// positive definite, the linear instance of "S is maximally cyclically
/// monotone iff S⁻¹ is".
pub fn inverse_preserves_cyclic<T: Real>(m: &DMatrix<T>) -> Result<bool> {
    let tol = T::tolerances();
    if !linalg::is_symmetric(m, tol.symmetry) || m.clone().cholesky().is_none() {
        return Err(Error::NotSymmetricPd);
    }
    let inv = linalg::inverse(m).ok_or(Error::NotSymmetricPd)?;
    let symmetric = linalg::symmetry_defect(&inv) <= tol.proximal;
    let definite = linalg::sym_part(&inv).cholesky().is_some();
    Ok(symmetric && definite)
}
