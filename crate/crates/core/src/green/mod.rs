//! Green generators of lower rank-structured matrices, their elementary
//! transform products and the product with an upper triangular matrix.

mod generators;
pub mod io;
mod multiply;
mod transform;

pub use generators::{check_green_rank, check_upper_green_rank, BlockPartitionMap, GreenGenerators};
pub use multiply::multiply_upper_triangular;
pub use transform::{
    generators_from_transforms, transforms_from_generators, ClosingBlock, ProductOrder, TransformProduct,
};

use crate::matrix::DenseMatrix;
use crate::scalar::Real;

/// Dense product of the embedded factors, in the order the product records.
pub fn expand_transform_product<T: Real>(t: &TransformProduct<T>) -> DenseMatrix<T> {
    t.expand()
}

/// `max_k |a(k) a(k)^T + q(k) q(k)^T - I_r|_F` over `k = 2..n-r`, which
/// vanishes for generators in right normal form.
pub fn right_normal_form_defect<T: Real>(g: &GreenGenerators<T>) -> T {
    let r = g.r();
    let eye = DenseMatrix::identity(r);
    g.a()
        .iter()
        .zip(g.q())
        .skip(1)
        .map(|(a, q)| {
            let qq = DenseMatrix::from_fn(r, r, |i, j| q[i] * q[j]);
            a.matmul(&a.transpose()).add(&qq).sub(&eye).frobenius_norm()
        })
        .fold(T::zero(), T::max)
}

/// Relative Frobenius error of the covered part reconstructed from `g`
/// against `tril(reference, r - 1)`.
pub fn covered_relative_error<T: Real>(g: &GreenGenerators<T>, reference: &DenseMatrix<T>) -> T {
    let k = g.r() as isize - 1;
    crate::matrix::relative_error(&g.reconstruct_structured(), &reference.tril(k))
}
