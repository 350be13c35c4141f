#![allow(dead_code)]

use greenband::{BandedMatrix, DenseMatrix, UpperBandwidth};
use nalgebra::DMatrix;

pub fn to_na(m: &DenseMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn from_na(m: &DMatrix<f64>) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Inverse from nalgebra's partially pivoted LU, independent of the crate's
/// own dense oracle.
pub fn na_inverse(m: &DenseMatrix<f64>) -> DenseMatrix<f64> {
    from_na(&to_na(m).try_inverse().expect("oracle matrix is invertible"))
}

/// Spectral condition number from nalgebra's SVD.
pub fn na_cond2(m: &DenseMatrix<f64>) -> f64 {
    let sv = to_na(m).singular_values();
    sv.max() / sv.min()
}

pub fn band_from_dense(m: &DenseMatrix<f64>, r: usize, u: UpperBandwidth) -> BandedMatrix<f64> {
    BandedMatrix::from_dense(m, r, u).expect("matrix fits the band")
}

/// Discrete Laplacian `tridiag(-1, 2, -1)`.
pub fn laplacian(n: usize) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    })
}
