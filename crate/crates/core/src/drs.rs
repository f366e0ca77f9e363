//! Douglas-Rachford iteration for `0 ∈ (A + B)x`:
//!
//! ```text
//! z⁺ = z − J_{τB}(z) + J_{τA}(2·J_{τB}(z) − z)
//! ```
//!
//! together with its relaxed variant `(1 − γ)z + γ·z⁺`, trajectory
//! recording and an independent optimality certificate.

use std::fmt::Write as _;

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json;
use crate::numfmt::format_g17;
use crate::operator::OperatorSpec;
use crate::scalar::Real;

/// Intermediate quantities of one splitting step started from `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct DrsParts<T: Real> {
    /// `x = J_{τB}(z)`.
    pub x: DVector<T>,
    /// `w = J_{τA}(2x − z)`.
    pub w: DVector<T>,
    /// `z + w − x`, the unrelaxed update.
    pub next: DVector<T>,
}

pub fn drs_parts<T: Real>(
    a: &OperatorSpec<T>,
    b: &OperatorSpec<T>,
    tau: T,
    z: &DVector<T>,
) -> Result<DrsParts<T>> {
    let x = b.resolve(tau, z)?;
    let reflected = &x * T::lit(2.0) - z;
    let w = a.resolve(tau, &reflected)?;
    let next = z - &x + &w;
    Ok(DrsParts { x, w, next })
}

/// The unrelaxed splitting map `z ↦ z − J_{τB}(z) + J_{τA}(2J_{τB}(z) − z)`.
pub fn drs_map<T: Real>(
    a: &OperatorSpec<T>,
    b: &OperatorSpec<T>,
    tau: T,
    z: &DVector<T>,
) -> Result<DVector<T>> {
    drs_parts(a, b, tau, z).map(|p| p.next)
}

/// Ambient dimension implied by a pair of operators, if either fixes one.
pub fn infer_dim<T: Real>(a: &OperatorSpec<T>, b: &OperatorSpec<T>) -> Result<Option<usize>> {
    match (a.dim(), b.dim()) {
        (Some(da), Some(db)) if da != db => Err(Error::DimensionMismatch {
            expected: da,
            found: db,
        }),
        (Some(d), _) | (_, Some(d)) => Ok(Some(d)),
        (None, None) => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrsProblem<T: Real> {
    a: OperatorSpec<T>,
    b: OperatorSpec<T>,
    dim: usize,
    tau: T,
    gamma: T,
    max_iters: usize,
    stop_tol: T,
    seed: u64,
}

impl<T: Real> DrsProblem<T> {
    pub const DEFAULT_MAX_ITERS: usize = 100_000;

    /// Problem on `ℝ^dim` with `τ = 1`, `γ = 1`, `stop_tol = 1e-10`, `max_iters = 10⁵`, seed 0.
    pub fn new(a: OperatorSpec<T>, b: OperatorSpec<T>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        a.check_dim(dim)?;
        b.check_dim(dim)?;
        Ok(Self {
            a,
            b,
            dim,
            tau: T::one(),
            gamma: T::one(),
            max_iters: Self::DEFAULT_MAX_ITERS,
            stop_tol: T::lit(1e-10),
            seed: 0,
        })
    }

    /// Like [`DrsProblem::new`] with the dimension taken from the operators.
    pub fn inferred(a: OperatorSpec<T>, b: OperatorSpec<T>) -> Result<Self> {
        let dim = infer_dim(&a, &b)?.ok_or_else(|| {
            Error::InvalidParameter("neither operator fixes a dimension; pass it explicitly".into())
        })?;
        Self::new(a, b, dim)
    }

    pub fn with_tau(mut self, tau: T) -> Result<Self> {
        if !(tau > T::zero() && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau must be positive, got {tau}"
            )));
        }
        self.tau = tau;
        Ok(self)
    }

    /// Relaxation in `(0, 2]`; `γ = 2` is accepted but flagged on trajectories.
    pub fn with_gamma(mut self, gamma: T) -> Result<Self> {
        if !(gamma > T::zero() && gamma <= T::lit(2.0)) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (0, 2], got {gamma}"
            )));
        }
        self.gamma = gamma;
        Ok(self)
    }

    pub fn with_stop_tol(mut self, stop_tol: T) -> Result<Self> {
        if !(stop_tol > T::zero() && stop_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "stop_tol must be positive, got {stop_tol}"
            )));
        }
        self.stop_tol = stop_tol;
        Ok(self)
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Result<Self> {
        if max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be positive".into()));
        }
        self.max_iters = max_iters;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn a(&self) -> &OperatorSpec<T> {
        &self.a
    }

    pub fn b(&self) -> &OperatorSpec<T> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters
    }

    pub fn stop_tol(&self) -> T {
        self.stop_tol
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn check_point(&self, z: &DVector<T>) -> Result<()> {
        if z.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            })
        }
    }

    pub fn step(&self, z: &DVector<T>) -> Result<DVector<T>> {
        self.check_point(z)?;
        drs_map(&self.a, &self.b, self.tau, z)
    }

    /// `(1 − γ)z + γ·step(z)`.
    pub fn relaxed_step(&self, z: &DVector<T>) -> Result<DVector<T>> {
        let t = self.step(z)?;
        Ok(z * (T::one() - self.gamma) + t * self.gamma)
    }

    /// The primal point `x = J_{τB}(z)` associated with a splitting variable.
    pub fn solution(&self, z: &DVector<T>) -> Result<DVector<T>> {
        self.check_point(z)?;
        self.b.resolve(self.tau, z)
    }

    /// Iterates the relaxed map from `z0` until `‖z^{k+1} − z^k‖ ≤ stop_tol`
    /// or `max_iters` steps have been taken.
    pub fn run(&self, z0: &DVector<T>) -> Result<TrajectoryRecord<T>> {
        self.check_point(z0)?;
        let mut rows = Vec::new();
        let mut z = z0.clone();
        let mut status = TerminalStatus::MaxIters;
        for k in 0..self.max_iters {
            let parts = drs_parts(&self.a, &self.b, self.tau, &z)?;
            let next = &z * (T::one() - self.gamma) + parts.next * self.gamma;
            let residual = (&next - &z).norm();
            rows.push(TrajectoryRow {
                k,
                z,
                x: parts.x,
                w: parts.w,
                residual,
            });
            z = next;
            if residual <= self.stop_tol {
                status = TerminalStatus::Converged;
                break;
            }
        }
        Ok(TrajectoryRecord {
            dim: self.dim,
            rows,
            final_z: z,
            status,
            boundary_relaxation: self.gamma == T::lit(2.0),
        })
    }

    /// Checks `0 ∈ (A + B)x` at `x = J_{τB}(z)` through `u ∈ Bx` and `−u ∈ Ax`
    /// with `u = (z − x)/τ`.
    pub fn solution_certificate(&self, z: &DVector<T>, tol: T) -> Result<bool> {
        let x = self.solution(z)?;
        let u = (z - &x) / self.tau;
        Ok(self.b.graph_member(&x, &u, tol)? && self.a.graph_member(&x, &(-u), tol)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TerminalStatus {
    Converged,
    MaxIters,
}

/// One iteration: `z = z^k`, `x = J_{τB}(z^k)`, `w = J_{τA}(2x − z^k)` and
/// `residual = ‖z^{k+1} − z^k‖`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct TrajectoryRow<T: Real> {
    pub k: usize,
    #[serde(with = "json::vector")]
    pub z: DVector<T>,
    #[serde(with = "json::vector")]
    pub x: DVector<T>,
    #[serde(with = "json::vector")]
    pub w: DVector<T>,
    pub residual: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct TrajectoryRecord<T: Real> {
    pub dim: usize,
    pub rows: Vec<TrajectoryRow<T>>,
    /// The iterate after the last recorded step.
    #[serde(with = "json::vector")]
    pub final_z: DVector<T>,
    pub status: TerminalStatus,
    /// Set when the run used `γ = 2`, where averagedness no longer holds.
    pub boundary_relaxation: bool,
}

impl<T: Real> TrajectoryRecord<T> {
    pub fn iterations(&self) -> usize {
        self.rows.len()
    }

    pub fn converged(&self) -> bool {
        self.status == TerminalStatus::Converged
    }

    pub fn csv_header(&self) -> String {
        let mut cols = vec!["k".to_string()];
        for name in ["z", "x", "w"] {
            cols.extend((0..self.dim).map(|i| format!("{name}{i}")));
        }
        cols.push("residual".into());
        cols.join(",")
    }

    /// CSV with header `k,z0..,x0..,w0..,residual`, values printed as `%.17g`.
    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{}", row.k);
            for v in row.z.iter().chain(row.x.iter()).chain(row.w.iter()) {
                let _ = write!(out, ",{}", format_g17(v.as_f64()));
            }
            let _ = writeln!(out, ",{}", format_g17(row.residual.as_f64()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    fn l1_quadratic() -> DrsProblem<f64> {
        DrsProblem::new(
            OperatorSpec::l1(1.0).unwrap(),
            OperatorSpec::quadratic(dmatrix![1.0], dvector![-1.0]).unwrap(),
            1,
        )
        .unwrap()
    }

    fn identities() -> DrsProblem<f64> {
        let id = OperatorSpec::scaled_identity(1.0).unwrap();
        DrsProblem::new(id.clone(), id, 1).unwrap()
    }

    fn zeros(n: usize) -> DrsProblem<f64> {
        DrsProblem::new(OperatorSpec::zero(), OperatorSpec::zero(), n).unwrap()
    }

    #[test]
    fn step_examples() {
        assert_eq!(
            zeros(2).step(&dvector![5.0, -1.0]).unwrap(),
            dvector![5.0, -1.0]
        );
        assert_eq!(identities().step(&dvector![4.0]).unwrap(), dvector![2.0]);
        // J_B(0) = 0.5, reflection 1, J_A(1) = 0, so z⁺ = 0 − 0.5 + 0.
        assert_eq!(l1_quadratic().step(&dvector![0.0]).unwrap(), dvector![-0.5]);
    }

    #[test]
    fn relaxed_step_examples() {
        let p = l1_quadratic();
        let z = dvector![0.3];
        assert_eq!(p.relaxed_step(&z).unwrap(), p.step(&z).unwrap());
        let p = zeros(1).with_gamma(1.7).unwrap();
        assert!((p.relaxed_step(&dvector![3.0]).unwrap()[0] - 3.0).abs() < 1e-15);
        let p = identities().with_gamma(1.5).unwrap();
        assert_eq!(p.relaxed_step(&dvector![4.0]).unwrap(), dvector![1.0]);
    }

    #[test]
    fn zero_problem_converges_in_one_step() {
        let rec = zeros(3).run(&dvector![1.0, -2.0, 0.5]).unwrap();
        assert!(rec.converged());
        assert_eq!(rec.iterations(), 1);
        assert_eq!(rec.rows[0].x, dvector![1.0, -2.0, 0.5]);
    }

    #[test]
    fn identity_problem_halves_each_step() {
        let rec = identities().run(&dvector![8.0]).unwrap();
        assert!(rec.converged());
        for row in &rec.rows {
            assert_eq!(row.z[0], 8.0 * 0.5f64.powi(row.k as i32));
        }
        assert!(rec.final_z[0].abs() <= 1e-10);
    }

    #[test]
    fn l1_quadratic_reaches_analytic_minimizer() {
        let p = l1_quadratic();
        let rec = p.run(&dvector![0.0]).unwrap();
        assert!(rec.converged());
        let x = p.solution(&rec.final_z).unwrap();
        assert!(x[0].abs() <= 1e-8);
        assert!((rec.final_z[0] + 1.0).abs() <= 1e-8);
        assert!(p
            .solution_certificate(&rec.final_z, 100.0 * p.stop_tol())
            .unwrap());
    }

    #[test]
    fn certificate_examples() {
        assert!(zeros(2)
            .solution_certificate(&dvector![3.0, 1.0], 1e-12)
            .unwrap());
        let p = l1_quadratic();
        assert!(p.solution_certificate(&dvector![-1.0], 1e-12).unwrap());
        assert!(!p.solution_certificate(&dvector![0.0], 1e-12).unwrap());
    }

    #[test]
    fn max_iters_is_reported() {
        let p = identities().with_max_iters(3).unwrap();
        let rec = p.run(&dvector![8.0]).unwrap();
        assert_eq!(rec.status, TerminalStatus::MaxIters);
        assert_eq!(rec.iterations(), 3);
        assert_eq!(rec.final_z, dvector![1.0]);
    }

    #[test]
    fn parameter_validation() {
        assert!(identities().with_gamma(0.0).is_err());
        assert!(identities().with_gamma(2.5).is_err());
        assert!(identities().with_tau(-1.0).is_err());
        assert!(identities().with_stop_tol(0.0).is_err());
        let rec = identities()
            .with_gamma(2.0)
            .unwrap()
            .with_max_iters(2)
            .unwrap()
            .run(&dvector![1.0])
            .unwrap();
        assert!(rec.boundary_relaxation);
        assert!(DrsProblem::<f64>::inferred(OperatorSpec::zero(), OperatorSpec::zero()).is_err());
        assert!(identities().step(&dvector![1.0, 2.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let rec = zeros(2).run(&dvector![0.1, -2.0]).unwrap();
        assert_eq!(
            rec.to_csv(),
            "k,z0,z1,x0,x1,w0,w1,residual\n\
             0,0.10000000000000001,-2,0.10000000000000001,-2,0.10000000000000001,-2,0\n"
        );
    }

    #[test]
    fn single_precision_tracks_double() {
        let p32 = DrsProblem::new(
            OperatorSpec::<f32>::l1(1.0).unwrap(),
            OperatorSpec::quadratic(dmatrix![1.0f32], dvector![-1.0f32]).unwrap(),
            1,
        )
        .unwrap()
        .with_stop_tol(1e-6)
        .unwrap();
        let rec = p32.run(&dvector![0.0f32]).unwrap();
        assert!(rec.converged());
        assert!(p32.solution(&rec.final_z).unwrap()[0].abs() <= 1e-5);
    }
}
