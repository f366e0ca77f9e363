//! Douglas-Rachford splitting in three equivalent forms (the classical
//! recursion, a lifted degenerate proximal point step, and the resolvent of
//! an explicit maximally monotone operator) together with numerical checks
//! of monotonicity, cyclic monotonicity and the proximal-mapping property.
//!
//! Everything is generic over the scalar type through [`Real`]; the `*64`
//! aliases fix it to `f64`.
//!
//! ```
//! use drslab::{DrsProblem64, OperatorSpec64, Vector};
//! use nalgebra::{dmatrix, dvector};
//!
//! // min |x| + ½(x − 1)²
//! let p = DrsProblem64::new(
//!     OperatorSpec64::l1(1.0)?,
//!     OperatorSpec64::quadratic(dmatrix![1.0], dvector![-1.0])?,
//!     1,
//! )?;
//! let rec = p.run(&Vector::zeros(1))?;
//! assert!(p.solution(&rec.final_z)?[0].abs() <= 1e-8);
//! assert!(p.solution_certificate(&rec.final_z, 1e-8)?);
//! # Ok::<(), drslab::Error>(())
//! ```

pub mod block;
pub mod catalog;
pub mod drs;
pub mod equivalence;
pub mod error;
pub mod json;
pub mod linalg;
pub mod mono;
pub mod numfmt;
pub mod operator;
pub mod ppa;
pub mod sampling;
pub mod scalar;

pub use block::{BlockSystem, EliminationPair};
pub use drs::{DrsProblem, TerminalStatus, TrajectoryRecord, TrajectoryRow};
pub use equivalence::{compare_formulations, EquivalenceReport};
pub use error::{Error, Result};
pub use mono::{CycleWitness, ResolventClassification, Verdict};
pub use operator::{OperatorSpec, ProxKind, ResolventQuery};
pub use ppa::{PpaState, PpaSystem};
pub use scalar::{Real, Tolerances};

pub type Vector<T> = nalgebra::DVector<T>;
pub type Matrix<T> = nalgebra::DMatrix<T>;

pub type OperatorSpec64 = OperatorSpec<f64>;
pub type DrsProblem64 = DrsProblem<f64>;
pub type BlockSystem64 = BlockSystem<f64>;
pub type PpaSystem64 = PpaSystem<f64>;
pub type PpaState64 = PpaState<f64>;
pub type CycleWitness64 = CycleWitness<f64>;
pub type TrajectoryRecord64 = TrajectoryRecord<f64>;

pub type OperatorSpec32 = OperatorSpec<f32>;
pub type DrsProblem32 = DrsProblem<f32>;
