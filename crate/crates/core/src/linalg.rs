//! Small dense helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn sym_part<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    (m + m.transpose()) * T::lit(0.5)
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues<T: Real>(m: &DMatrix<T>) -> Vec<T> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut eig: Vec<T> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    eig
}

/// Smallest eigenvalue of the symmetric part and the largest absolute one.
pub fn sym_spectrum_bounds<T: Real>(m: &DMatrix<T>) -> (T, T) {
    let eig = sym_eigenvalues(&sym_part(m));
    let min = eig.first().copied().unwrap_or_else(T::zero);
    let max_abs = eig.iter().fold(T::zero(), |acc, e| acc.max(e.abs()));
    (min, max_abs)
}

/// `(M + Mᵀ)/2 ⪰ 0` up to `rel_tol` times the largest absolute eigenvalue.
pub fn is_monotone_matrix<T: Real>(m: &DMatrix<T>, rel_tol: T) -> bool {
    let (min, max_abs) = sym_spectrum_bounds(m);
    min >= -rel_tol * max_abs
}

pub fn is_symmetric<T: Real>(m: &DMatrix<T>, rel_tol: T) -> bool {
    m.is_square() && symmetry_defect(m) <= rel_tol
}

/// `‖M − Mᵀ‖_F / max(1, ‖M‖_F)`.
pub fn symmetry_defect<T: Real>(m: &DMatrix<T>) -> T {
    let skew = m - m.transpose();
    skew.norm() / m.norm().max(T::one())
}

pub fn solve<T: Real>(m: &DMatrix<T>, rhs: &DVector<T>) -> Result<DVector<T>> {
    if m.nrows() != rhs.len() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: rhs.len(),
        });
    }
    let x = m.clone().lu().solve(rhs).ok_or(Error::SingularSystem)?;
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::SingularSystem)
    }
}

pub fn solve_matrix<T: Real>(m: &DMatrix<T>, rhs: &DMatrix<T>) -> Result<DMatrix<T>> {
    if m.nrows() != rhs.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: rhs.nrows(),
        });
    }
    let x = m.clone().lu().solve(rhs).ok_or(Error::SingularSystem)?;
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::SingularSystem)
    }
}

pub fn inverse<T: Real>(m: &DMatrix<T>) -> Option<DMatrix<T>> {
    let inv = m.clone().try_inverse()?;
    inv.iter().all(|v| v.is_finite()).then_some(inv)
}

/// Numerical rank from the singular values, relative to the largest one.
pub fn rank<T: Real>(m: &DMatrix<T>, rel_tol: T) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().fold(T::zero(), |acc, s| acc.max(*s));
    if max == T::zero() {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * max).count()
}

pub fn is_zero<T: Real>(m: &DMatrix<T>) -> bool {
    m.iter().all(|v| *v == T::zero())
}

/// Rows of `[[a, b], [c, d]]` stacked into one dense matrix.
pub fn block2<T: Real>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    c: &DMatrix<T>,
    d: &DMatrix<T>,
) -> DMatrix<T> {
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    debug_assert_eq!(b.shape(), (r1, c2));
    debug_assert_eq!(c.shape(), (r2, c1));
    let mut out = DMatrix::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a);
    out.view_mut((0, c1), (r1, c2)).copy_from(b);
    out.view_mut((r1, 0), (r2, c1)).copy_from(c);
    out.view_mut((r1, c1), (r2, c2)).copy_from(d);
    out
}

pub fn concat<T: Real>(a: &DVector<T>, b: &DVector<T>) -> DVector<T> {
    DVector::from_iterator(a.len() + b.len(), a.iter().chain(b.iter()).copied())
}

pub fn split<T: Real>(x: &DVector<T>, head: usize) -> (DVector<T>, DVector<T>) {
    (
        x.rows(0, head).into_owned(),
        x.rows(head, x.len() - head).into_owned(),
    )
}
