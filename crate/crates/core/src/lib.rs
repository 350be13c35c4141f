//! Linear-time inversion of band matrices through Green generators.
//!
//! The inverse of a nonsingular lower band matrix of order `r` is a lower
//! Green matrix of order `r`: every submatrix `B(k:n, 1:k+r-1)` has rank at
//! most `r`. Its part on and below superdiagonal `r - 1` is described by
//! `O(n r^2)` numbers ([`GreenGenerators`]), which this crate computes from
//! a structured QR ([`invert_two_sided_qr`], [`invert_lower_band_qr`]) or
//! an unpivoted LU ([`invert_two_sided_lu`], [`invert_lower_band_lu`]) of
//! the band matrix.
//!
//! ```
//! use greenband::{invert_two_sided_qr, random_band, UpperBandwidth};
//!
//! let a = random_band::<f64>(200, 3, UpperBandwidth::Limited(3), 7, 3.0).unwrap();
//! let g = invert_two_sided_qr(&a).unwrap();
//! // entry (10, 8) of the inverse, 0-based
//! let x = g.entry(10, 8).unwrap();
//! assert!(x.is_finite());
//! ```
//!
//! Everything is generic over [`Real`] (`f32` and `f64`); the `F64` and
//! `F32` aliases name the common instantiations.

pub mod error;
pub mod green;
pub mod lu;
pub mod matrix;
pub mod qr;
mod recursion;
pub mod scalar;

pub use error::{Error, Result};
pub use green::{
    check_green_rank, check_upper_green_rank, covered_relative_error, expand_transform_product,
    generators_from_transforms, multiply_upper_triangular, right_normal_form_defect, transforms_from_generators,
    BlockPartitionMap, ClosingBlock, GreenGenerators, ProductOrder, TransformProduct,
};
pub use lu::{
    elementary_factors_from_entrywise, invert_lower_band_lu, invert_two_sided_lu, lu_factor_lower_band,
    lu_factor_two_sided, LuFactorization,
};
pub use matrix::{
    condition_number_2, dense_householder_qr, dense_invert, dense_qr_invert, householder_annihilate, norm2_estimate,
    numerical_rank, prescribed_condition_band, random_band, relative_error, BandedMatrix, DenseMatrix,
    HouseholderResult, UniformStream, UpperBandwidth,
};
pub use qr::{invert_lower_band_qr, invert_two_sided_qr, qr_factor_lower_band, qr_factor_two_sided, QrFactorization};
pub use recursion::UpperRows;
pub use scalar::Real;

pub type DenseMatrixF64 = DenseMatrix<f64>;
pub type BandedMatrixF64 = BandedMatrix<f64>;
pub type GreenGeneratorsF64 = GreenGenerators<f64>;
pub type TransformProductF64 = TransformProduct<f64>;
pub type QrFactorizationF64 = QrFactorization<f64>;
pub type LuFactorizationF64 = LuFactorization<f64>;

pub type DenseMatrixF32 = DenseMatrix<f32>;
pub type BandedMatrixF32 = BandedMatrix<f32>;
pub type GreenGeneratorsF32 = GreenGenerators<f32>;
pub type TransformProductF32 = TransformProduct<f32>;
pub type QrFactorizationF32 = QrFactorization<f32>;
pub type LuFactorizationF32 = LuFactorization<f32>;
