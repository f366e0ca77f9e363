//! Side-by-side iteration of the three formulations of the splitting map:
//! the classical recursion, the `z`-component of the lifted proximal point
//! step, and `√τ` times the reduced resolvent evaluated with dense solves.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::block::BlockSystem;
use crate::drs::DrsProblem;
use crate::error::{Error, Result};
use crate::ppa::{PpaState, PpaSystem};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct EquivalenceReport<T: Real> {
    /// Largest `‖zᵢᵏ − zⱼᵏ‖` over iterations `k` and compared paths `i, j`.
    pub max_deviation: T,
    /// Largest lifted inclusion residual seen along the way.
    pub max_ppa_residual: T,
    pub iters: usize,
    pub formulations: Vec<&'static str>,
    /// Why the dense reduced path was skipped, if it was.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
}

/// Prepared `(I + 𝓚𝓛⁻¹𝓚ᵀ)`, or the reason it is unavailable.
fn direct_system<T: Real>(sys: &BlockSystem<T>) -> Result<std::result::Result<DMatrix<T>, String>> {
    match sys.reduced_operator_matrix() {
        Ok(g) => {
            let n = sys.n();
            Ok(Ok(DMatrix::identity(n, n) + g))
        }
        Err(
            e @ (Error::NonLinearBlock(_) | Error::NonInvertibleBlock(_) | Error::SingularSystem),
        ) => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

/// Runs `iters` unrelaxed steps from `z0` along every available path.
pub fn compare_formulations<T: Real>(
    problem: &DrsProblem<T>,
    z0: &DVector<T>,
    iters: usize,
) -> Result<EquivalenceReport<T>> {
    let n = problem.dim();
    if z0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: z0.len(),
        });
    }
    let tau = problem.tau();
    let ppa = PpaSystem::new(problem.a().clone(), problem.b().clone(), tau, n)?;
    let block = ppa.block_system();
    let direct = direct_system(&block)?;
    let sqrt_tau = block.sqrt_tau();

    let mut formulations = vec!["classical", "lifted"];
    let (lu, fallback) = match direct {
        Ok(m) => {
            formulations.push("reduced");
            (Some(m.lu()), None)
        }
        Err(reason) => (None, Some(reason)),
    };

    let mut z = z0.clone();
    let mut state = PpaState::from_z(z0.clone());
    let mut v = z0 / sqrt_tau;
    let mut max_deviation = T::zero();
    let mut max_ppa_residual = T::zero();
    for _ in 0..iters {
        z = problem.step(&z)?;
        let next = ppa.step(&state)?;
        max_ppa_residual = max_ppa_residual.max(ppa.inclusion_residual(&state, &next)?);
        state = next;
        max_deviation = max_deviation.max((&z - &state.z).norm());
        if let Some(lu) = &lu {
            v = lu.solve(&v).ok_or(Error::SingularSystem)?;
            let zr = &v * sqrt_tau;
            max_deviation = max_deviation
                .max((&z - &zr).norm())
                .max((&state.z - &zr).norm());
        }
    }
    Ok(EquivalenceReport {
        max_deviation,
        max_ppa_residual,
        iters,
        formulations,
        fallback,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::OperatorSpec;
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn zero_pair_has_no_deviation_and_falls_back() {
        let p = DrsProblem::new(OperatorSpec::zero(), OperatorSpec::zero(), 2).unwrap();
        let r = compare_formulations(&p, &dvector![1.0, -3.0], 20).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert_eq!(r.formulations, vec!["classical", "lifted"]);
        assert!(r.fallback.is_some());
    }

    #[test]
    fn invertible_linear_pair_uses_all_three_paths() {
        let p = DrsProblem::new(
            OperatorSpec::linear(dmatrix![2.0, 1.0; -1.0, 1.0]).unwrap(),
            OperatorSpec::linear(dmatrix![1.0, 0.0; 0.0, 3.0]).unwrap(),
            2,
        )
        .unwrap()
        .with_tau(0.3)
        .unwrap();
        let r = compare_formulations(&p, &dvector![1.0, 2.0], 100).unwrap();
        assert_eq!(r.formulations.len(), 3);
        assert!(r.max_deviation <= 1e-10, "{}", r.max_deviation);
        assert!(r.max_ppa_residual <= 1e-10);
    }
}
