//! Dense and banded containers, test-matrix generators and the dense
//! verification oracle.

mod banded;
mod dense;
mod householder;
pub mod io;
mod oracle;
mod random;

pub use banded::{BandedMatrix, UpperBandwidth};
pub(crate) use dense::{axpy, dot};
pub use dense::{relative_error, DenseMatrix};
pub(crate) use householder::Reflector;
pub use householder::{householder_annihilate, HouseholderResult};
pub use oracle::{
    condition_number_2, dense_householder_qr, dense_invert, dense_qr_invert, norm2_estimate, numerical_rank,
};
pub use random::{prescribed_condition_band, random_band, UniformStream};
