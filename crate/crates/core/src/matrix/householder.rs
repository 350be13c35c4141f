use crate::matrix::dense::{axpy, dot};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

/// A unitary block `u` with `u* v = (x, 0, ..., 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HouseholderResult<T> {
    /// Symmetric orthogonal reflector `I - beta w w^T` (so `u* = u`), or the
    /// identity when the input vanishes.
    pub u: DenseMatrix<T>,
    /// Leading entry after annihilation; `x = -sign(v[0]) |v|`.
    pub x: T,
}

/// Compact reflector `I - beta w w^T`, used on the hot paths instead of
/// multiplying by the dense block.
#[derive(Debug, Clone)]
pub(crate) struct Reflector<T> {
    w: Vec<T>,
    beta: T,
}

impl<T: Real> Reflector<T> {
    /// Reflector annihilating `v[1..]`, together with the resulting leading entry.
    pub(crate) fn annihilating(v: &[T]) -> (Self, T) {
        let norm = v.iter().fold(T::zero(), |acc, &x| acc.hypot(x));
        if norm == T::zero() {
            return (
                Self {
                    w: vec![T::zero(); v.len()],
                    beta: T::zero(),
                },
                T::zero(),
            );
        }
        let x = if v[0] < T::zero() { norm } else { -norm };
        let mut w = v.to_vec();
        w[0] -= x;
        // w^T w = 2 (|v|^2 - x v0) = 2 |x| (|x| + |v0|)
        let wtw = (norm + v[0].abs()) * norm * (T::one() + T::one());
        let beta = (T::one() + T::one()) / wtw;
        (Self { w, beta }, x)
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.w.len()
    }

    /// In-place `rows <- H rows`, where `rows[i]` is row `i` of the block.
    pub(crate) fn apply_rows(&self, rows: &mut [Vec<T>]) {
        if self.beta == T::zero() {
            return;
        }
        let width = rows.first().map_or(0, Vec::len);
        let mut s = vec![T::zero(); width];
        for (wi, row) in self.w.iter().zip(rows.iter()) {
            axpy(*wi, row, &mut s);
        }
        for (wi, row) in self.w.iter().zip(rows.iter_mut()) {
            axpy(-self.beta * *wi, &s, row);
        }
    }

    pub(crate) fn apply_vec(&self, v: &mut [T]) {
        let s = self.beta * dot(&self.w, v);
        axpy(-s, &self.w, v);
    }

    pub(crate) fn to_dense(&self) -> DenseMatrix<T> {
        let m = self.len();
        DenseMatrix::from_fn(m, m, |i, j| {
            let id = if i == j { T::one() } else { T::zero() };
            id - self.beta * self.w[i] * self.w[j]
        })
    }
}

/// Householder reflector annihilating every entry of `v` below the first.
///
/// The zero vector yields the identity with `x = 0`.
pub fn householder_annihilate<T: Real>(v: &[T]) -> HouseholderResult<T> {
    assert!(!v.is_empty(), "householder_annihilate needs a nonempty vector");
    let (h, x) = Reflector::annihilating(v);
    HouseholderResult { u: h.to_dense(), x }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residuals(v: &[f64]) -> (f64, f64, f64) {
        let h = householder_annihilate(v);
        let m = v.len();
        let unitarity =
            h.u.transpose()
                .matmul(&h.u)
                .sub(&DenseMatrix::identity(m))
                .frobenius_norm();
        let image = h.u.transpose().mul_vec(v);
        let mut target = vec![0.0; m];
        target[0] = h.x;
        let annihilation = image
            .iter()
            .zip(&target)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        (h.x, unitarity, annihilation)
    }

    #[test]
    fn pythagorean_pair() {
        let (x, unit, ann) = residuals(&[3.0, 4.0]);
        assert_eq!(x, -5.0);
        assert!(unit < 1e-15 && ann < 1e-14);
    }

    #[test]
    fn already_reduced_vector() {
        let h = householder_annihilate(&[2.5, 0.0, 0.0]);
        assert_eq!(h.x, -2.5);
        assert_eq!(h.u, DenseMatrix::from_diagonal(&[-1.0, 1.0, 1.0]));
        let h = householder_annihilate(&[-2.5, 0.0]);
        assert_eq!(h.x, 2.5);
    }

    #[test]
    fn zero_vector_gives_identity() {
        let h = householder_annihilate(&[0.0; 4]);
        assert_eq!(h.x, 0.0);
        assert_eq!(h.u, DenseMatrix::identity(4));
    }

    #[test]
    fn random_vector_residuals() {
        let v = [0.3, -1.7, 2.2, 0.05, -0.9, 1.1];
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let (x, unit, ann) = residuals(&v);
        assert!((x.abs() - norm).abs() < 1e-14 * norm);
        assert!(unit <= 1e-14, "{unit}");
        assert!(ann <= 1e-14 * norm, "{ann}");
    }

    #[test]
    fn compact_application_matches_dense() {
        let v = [1.0, 2.0, -3.0];
        let (h, _) = Reflector::annihilating(&v);
        let mut rows = vec![vec![1.0, 0.5], vec![-2.0, 1.0], vec![0.25, 4.0]];
        let dense = h.to_dense().matmul(&DenseMatrix::from_rows(&rows).unwrap());
        h.apply_rows(&mut rows);
        let got = DenseMatrix::from_rows(&rows).unwrap();
        assert!(got.sub(&dense).frobenius_norm() < 1e-14);
    }
}
