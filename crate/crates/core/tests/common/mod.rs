#![allow(dead_code)]

use cutpaste_core::qmath::{hermitian_eig, Complex64, ComplexMatrix};
use cutpaste_core::{c64, DensityMatrix, QuantumChannel};
use proptest::prelude::*;

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), rows * cols).prop_map(move |v| {
        let entries: Vec<Complex64> = v.into_iter().map(|(re, im)| c64(re, im)).collect();
        ComplexMatrix::from_row_major(rows, cols, &entries).unwrap()
    })
}

pub fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n, n).prop_map(|m| m.hermitian_part())
}

/// Unitary from the eigenvectors of a random Hermitian matrix.
pub fn unitary(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    hermitian(n).prop_map(|h| hermitian_eig(&h).unwrap().eigenvectors)
}

/// Mixed state of rank up to `rank` from a Ginibre matrix.
pub fn state(n: usize, rank: usize) -> impl Strategy<Value = DensityMatrix> {
    matrix(n, rank)
        .prop_filter("nonzero", |g| g.frobenius_norm() > 1e-3)
        .prop_map(|g| DensityMatrix::from_unnormalized(&g * g.dagger()).unwrap())
}

pub fn two_qubit_state() -> impl Strategy<Value = DensityMatrix> {
    (1usize..=4).prop_flat_map(|rank| state(4, rank))
}

/// Random CPTP qubit map: Kraus operators Mₖ G^{-1/2} with G = Σ Mₖ†Mₖ.
pub fn channel(kraus: usize) -> impl Strategy<Value = QuantumChannel> {
    prop::collection::vec(matrix(2, 2), kraus)
        .prop_filter("invertible gram", |ms| {
            let g = ms.iter().fold(ComplexMatrix::zeros(2, 2), |acc, m| acc + m.dagger() * m);
            hermitian_eig(&g).unwrap().eigenvalues[0] > 1e-3
        })
        .prop_map(|ms| {
            let g = ms.iter().fold(ComplexMatrix::zeros(2, 2), |acc, m| acc + m.dagger() * m);
            let inv_sqrt = hermitian_eig(&g).unwrap().map_spectrum(|l| c64(1.0 / l.sqrt(), 0.0));
            QuantumChannel::from_kraus(ms.iter().map(|m| m * &inv_sqrt).collect()).unwrap()
        })
}
