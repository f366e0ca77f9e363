//! A fixed, seeded set of test problems covering every operator variant.

use nalgebra::{dmatrix, DMatrix, DVector};

use crate::drs::DrsProblem;
use crate::operator::OperatorSpec;
use crate::sampling;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct CatalogProblem<T: Real> {
    pub name: &'static str,
    pub problem: DrsProblem<T>,
    /// Both operators are linear, so the splitting map is a matrix.
    pub linear: bool,
}

fn lit<T: Real>(m: DMatrix<f64>) -> DMatrix<T> {
    m.map(T::lit)
}

fn entry<T: Real>(
    name: &'static str,
    a: OperatorSpec<T>,
    b: OperatorSpec<T>,
    dim: usize,
    tau: f64,
) -> CatalogProblem<T> {
    let problem = DrsProblem::new(a, b, dim)
        .and_then(|p| p.with_tau(T::lit(tau)))
        .expect("catalog problems are valid");
    let linear =
        problem.a().linear_matrix(dim).is_some() && problem.b().linear_matrix(dim).is_some();
    CatalogProblem {
        name,
        problem,
        linear,
    }
}

pub fn catalog<T: Real>() -> Vec<CatalogProblem<T>> {
    let mut rng = sampling::seeded_rng(20_180_055);
    let skew = OperatorSpec::linear(lit(dmatrix![0.0, -1.0; 1.0, 0.0])).unwrap();
    let random_linear =
        |rng: &mut _| OperatorSpec::linear(sampling::monotone_matrix::<T, _>(rng, 5)).unwrap();
    let ra1 = random_linear(&mut rng);
    let rb1 = random_linear(&mut rng);
    let ra2 = random_linear(&mut rng);
    let rb2 = random_linear(&mut rng);
    let spd: DMatrix<T> = sampling::psd_matrix(&mut rng, 3) + DMatrix::identity(3, 3) * T::lit(0.1);
    let shift: DVector<T> = sampling::gaussian_vector(&mut rng, 3);
    let ident = |alpha: f64| OperatorSpec::scaled_identity(T::lit(alpha)).unwrap();

    vec![
        entry(
            "zero_zero",
            OperatorSpec::zero(),
            OperatorSpec::zero(),
            2,
            1.0,
        ),
        entry("identity_1d", ident(1.0), ident(1.0), 1, 1.0),
        entry("scaled_identity_3d", ident(2.0), ident(0.5), 3, 0.7),
        entry("skew_zero", skew.clone(), OperatorSpec::zero(), 2, 1.0),
        entry("skew_identity", skew, ident(1.0), 2, 1.0),
        entry("random_monotone_5d_a", ra1, rb1, 5, 1.0),
        entry("random_monotone_5d_b", ra2, rb2, 5, 0.4),
        entry(
            "linear_1d",
            OperatorSpec::linear(lit(dmatrix![2.0])).unwrap(),
            OperatorSpec::linear(lit(dmatrix![0.5])).unwrap(),
            1,
            0.5,
        ),
        entry(
            "coupled_block_3d",
            OperatorSpec::block2x2(ident(1.0), ident(0.5), lit(dmatrix![1.0, -2.0])).unwrap(),
            OperatorSpec::linear(lit(dmatrix![1.0, 0.0, 0.0; 0.0, 2.0, 0.5; 0.0, 0.5, 1.0]))
                .unwrap(),
            3,
            1.0,
        ),
        entry(
            "l1_quadratic_1d",
            OperatorSpec::l1(T::one()).unwrap(),
            OperatorSpec::quadratic(lit(dmatrix![1.0]), DVector::from_element(1, -T::one()))
                .unwrap(),
            1,
            1.0,
        ),
        entry(
            "box_quadratic_3d",
            OperatorSpec::indicator_box(
                DVector::from_element(3, -T::lit(0.5)),
                DVector::from_element(3, T::one()),
            )
            .unwrap(),
            OperatorSpec::quadratic(spd, shift * T::lit(2.0)).unwrap(),
            3,
            1.0,
        ),
        entry(
            "affine_l1_3d",
            OperatorSpec::indicator_affine(
                lit(dmatrix![1.0, 1.0, 1.0]),
                DVector::from_element(1, T::one()),
            )
            .unwrap(),
            OperatorSpec::inverse(OperatorSpec::l1(T::lit(0.5)).unwrap()),
            3,
            2.0,
        ),
    ]
}
