#![allow(dead_code)]

use drslab::sampling::{
    gaussian_vector, monotone_matrix, psd_matrix, seeded_rng, surjective_matrix,
};
use drslab::{Matrix, OperatorSpec64, Vector};
use nalgebra::{dmatrix, dvector};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    seeded_rng(seed)
}

pub fn point(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vector<f64> {
    gaussian_vector::<f64, _>(rng, n) * scale
}

/// One or more instances of every operator variant, with the dimension to probe them in.
pub fn variants() -> Vec<(&'static str, OperatorSpec64, usize)> {
    let mut r = rng(77);
    let skew = dmatrix![0.0, -1.0; 1.0, 0.0];
    let mono3: Matrix<f64> = monotone_matrix(&mut r, 3);
    let psd4: Matrix<f64> = psd_matrix(&mut r, 4);
    let e: Matrix<f64> = surjective_matrix(&mut r, 2, 4);
    let q4: Vector<f64> = gaussian_vector(&mut r, 4);
    let ops = vec![
        ("zero", OperatorSpec64::zero(), 3),
        (
            "scaled_identity",
            OperatorSpec64::scaled_identity(2.5).unwrap(),
            3,
        ),
        (
            "scaled_identity_zero",
            OperatorSpec64::scaled_identity(0.0).unwrap(),
            2,
        ),
        (
            "linear_skew",
            OperatorSpec64::linear(skew.clone()).unwrap(),
            2,
        ),
        (
            "linear_random",
            OperatorSpec64::linear(mono3.clone()).unwrap(),
            3,
        ),
        (
            "linear_singular",
            OperatorSpec64::linear(dmatrix![1.0, 1.0; 1.0, 1.0]).unwrap(),
            2,
        ),
        (
            "quadratic",
            OperatorSpec64::quadratic(psd4.clone(), q4.clone()).unwrap(),
            4,
        ),
        ("l1", OperatorSpec64::l1(0.7).unwrap(), 4),
        (
            "box",
            OperatorSpec64::indicator_box(dvector![-1.0, 0.0, 0.5], dvector![1.0, 0.0, 2.0])
                .unwrap(),
            3,
        ),
        (
            "affine",
            OperatorSpec64::indicator_affine(e, dvector![1.0, -2.0]).unwrap(),
            4,
        ),
        (
            "inverse_l1",
            OperatorSpec64::inverse(OperatorSpec64::l1(1.3).unwrap()),
            3,
        ),
        (
            "inverse_skew",
            OperatorSpec64::inverse(OperatorSpec64::linear(skew.clone()).unwrap()),
            2,
        ),
        (
            "inverse_zero",
            OperatorSpec64::inverse(OperatorSpec64::zero()),
            2,
        ),
        (
            "inverse_box",
            OperatorSpec64::inverse(
                OperatorSpec64::indicator_box(dvector![0.0, -2.0], dvector![1.0, 3.0]).unwrap(),
            ),
            2,
        ),
        (
            "block_uncoupled",
            OperatorSpec64::block2x2(
                OperatorSpec64::l1(1.0).unwrap(),
                OperatorSpec64::indicator_box(dvector![-1.0], dvector![1.0]).unwrap(),
                Matrix::zeros(1, 2),
            )
            .unwrap(),
            3,
        ),
        (
            "block_coupled",
            OperatorSpec64::block2x2(
                OperatorSpec64::linear(mono3).unwrap(),
                OperatorSpec64::scaled_identity(0.5).unwrap(),
                dmatrix![1.0, -2.0, 0.5; 0.0, 1.0, 1.0],
            )
            .unwrap(),
            5,
        ),
        (
            "block_pure_skew",
            OperatorSpec64::block2x2(
                OperatorSpec64::zero(),
                OperatorSpec64::zero(),
                dmatrix![1.0],
            )
            .unwrap(),
            2,
        ),
    ];
    ops
}
