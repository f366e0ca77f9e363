use std::path::Path;

use anyhow::{bail, Context};
use drslab::json::matrix_from_rows;
use drslab::{DrsProblem64, Matrix, OperatorSpec64, Vector};
use serde::Deserialize;

/// Problem file: `{"A": .., "B": .., "tau": ..}` plus per-command keys.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "A")]
    pub a: Option<OperatorSpec64>,
    #[serde(rename = "B")]
    pub b: Option<OperatorSpec64>,
    pub tau: Option<f64>,
    /// Needed only when neither operator fixes the dimension.
    pub dim: Option<usize>,
    pub z0: Option<Vec<f64>>,
    /// Operator for `check-cycle`; falls back to `A`.
    pub op: Option<OperatorSpec64>,
    #[serde(rename = "C")]
    pub c: Option<Vec<Vec<f64>>>,
    pub a1: Option<Vec<f64>>,
    pub b1: Option<Vec<f64>>,
}

impl ProblemFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read problem file {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("cannot parse problem file {}", path.display()))
    }

    fn pair(&self) -> anyhow::Result<(OperatorSpec64, OperatorSpec64)> {
        match (&self.a, &self.b) {
            (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
            _ => bail!("problem file needs both \"A\" and \"B\""),
        }
    }

    pub fn dim_for(&self, ops: &[&OperatorSpec64]) -> anyhow::Result<usize> {
        let fixed = ops.iter().find_map(|op| op.dim());
        match (self.dim, fixed) {
            (Some(d), _) | (None, Some(d)) => Ok(d),
            (None, None) => {
                bail!("neither operator fixes a dimension; add \"dim\" to the problem file")
            }
        }
    }

    /// The splitting problem with `tau` taken from the flag, then the file, then 1.
    pub fn drs_problem(&self, tau: Option<f64>) -> anyhow::Result<DrsProblem64> {
        let (a, b) = self.pair()?;
        let dim = self.dim_for(&[&a, &b])?;
        let tau = tau.or(self.tau).unwrap_or(1.0);
        Ok(DrsProblem64::new(a, b, dim)?.with_tau(tau)?)
    }

    pub fn z0(&self, dim: usize) -> anyhow::Result<Option<Vector<f64>>> {
        match &self.z0 {
            None => Ok(None),
            Some(v) if v.len() == dim => Ok(Some(Vector::from_vec(v.clone()))),
            Some(v) => bail!("\"z0\" has length {}, expected {dim}", v.len()),
        }
    }

    pub fn coupling(&self) -> anyhow::Result<Matrix<f64>> {
        let rows = self
            .c
            .as_ref()
            .context("problem file needs a \"C\" matrix")?;
        Ok(matrix_from_rows(rows)?)
    }

    pub fn cycle_operator(&self) -> anyhow::Result<OperatorSpec64> {
        self.op
            .clone()
            .or_else(|| self.a.clone())
            .context("problem file needs \"op\" or \"A\"")
    }
}
