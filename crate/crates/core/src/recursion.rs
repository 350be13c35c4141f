//! Pieces shared by the QR and LU inversion paths.

use crate::error::{Error, Result};
use crate::matrix::{axpy, DenseMatrix};
use crate::scalar::{singularity_threshold, Real};

/// Upper triangular factor stored by rows: `diag[k] = R(k, k)` and
/// `rows[k] = R(k, k+1 .. k+1+len)`, where `len` is `n - k - 1` for a full
/// factor and is capped at the upper bandwidth for a banded one.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperRows<T> {
    pub diag: Vec<T>,
    pub rows: Vec<Vec<T>>,
}

impl<T: Real> UpperRows<T> {
    pub(crate) fn with_capacity(n: usize) -> Self {
        Self {
            diag: Vec::with_capacity(n),
            rows: Vec::with_capacity(n),
        }
    }

    pub(crate) fn push(&mut self, d: T, row: Vec<T>) {
        self.diag.push(d);
        self.rows.push(row);
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let n = self.n();
        let mut out = DenseMatrix::zeros(n, n);
        for (k, (&d, row)) in self.diag.iter().zip(&self.rows).enumerate() {
            out[(k, k)] = d;
            out.row_mut(k)[k + 1..k + 1 + row.len()].copy_from_slice(row);
        }
        out
    }

    /// First `k` (1-based) with `|R(k, k)| <= n eps scale`.
    pub(crate) fn first_small_pivot(&self, scale: T) -> Option<usize> {
        let tol = singularity_threshold(self.n(), scale);
        self.diag.iter().position(|d| !(d.abs() > tol)).map(|k| k + 1)
    }
}

/// Rows `p(1) .. p(m)` of the generators of `R^{-1} G`, where `G` has
/// generators `(p_head, q, a, ..)` and the result keeps `q` and `a`.
///
/// Runs `p(k) = (p_head(k) - X_k P_{k+1} a(k)) / R(k, k)` from `k = m` down
/// to 1 with the tail stacks `P_k = [p(k); P_{k+1} a(k)]`, keeping only the
/// top `width` rows of each stack when `width` is given. That is exact
/// whenever the rows `X_k` have at most `width` entries.
pub(crate) fn inverse_row_generators<T: Real>(
    r: usize,
    p_head: impl Fn(usize) -> Vec<T>,
    a: &[DenseMatrix<T>],
    p_last: &DenseMatrix<T>,
    upper: &UpperRows<T>,
    width: Option<usize>,
) -> Vec<Vec<T>> {
    let m = a.len();
    let cap = width.unwrap_or(usize::MAX);
    // stack rows, flat, r entries each
    let keep = p_last.rows().min(cap);
    let mut stack: Vec<T> = p_last.as_slice()[..keep * r].to_vec();
    let mut next: Vec<T> = Vec::with_capacity(stack.len() + r);
    let mut p = vec![Vec::new(); m];
    for k in (0..m).rev() {
        let x = &upper.rows[k];
        let depth = stack.len() / r;
        let mut v = vec![T::zero(); r];
        for (xi, srow) in x.iter().zip(stack.chunks_exact(r)).take(depth) {
            axpy(*xi, srow, &mut v);
        }
        let va = a[k].left_mul_vec(&v);
        let inv = T::one() / upper.diag[k];
        let pk: Vec<T> = p_head(k).iter().zip(&va).map(|(&h, &w)| (h - w) * inv).collect();

        let new_depth = (depth + 1).min(cap);
        next.clear();
        if new_depth > 0 {
            next.extend_from_slice(&pk);
            for srow in stack.chunks_exact(r).take(new_depth - 1) {
                next.extend(a[k].left_mul_vec(srow));
            }
        }
        std::mem::swap(&mut stack, &mut next);
        p[k] = pk;
    }
    p
}

pub(crate) fn singular(index: usize) -> Error {
    Error::Singular { index }
}

/// `Err` naming the first small pivot of `upper`, if any.
pub(crate) fn check_pivots<T: Real>(upper: &UpperRows<T>, scale: T, err: fn(usize) -> Error) -> Result<()> {
    match upper.first_small_pivot(scale) {
        Some(k) => Err(err(k)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::GreenGenerators;

    #[test]
    fn upper_rows_dense_layout() {
        let mut u = UpperRows::with_capacity(3);
        u.push(1.0, vec![2.0, 3.0]);
        u.push(4.0, vec![5.0]);
        u.push(6.0, vec![]);
        let d = u.to_dense();
        assert_eq!(
            d,
            DenseMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![0.0, 4.0, 5.0], vec![0.0, 0.0, 6.0]]).unwrap()
        );
        assert_eq!(u.first_small_pivot(1.0), None);
        u.diag[1] = 1e-300;
        assert_eq!(u.first_small_pivot(1.0), Some(2));
    }

    #[test]
    fn matches_dense_triangular_solve() {
        // R^{-1} G for G given by generators, against the dense product.
        let (n, r) = (7, 2);
        let m = n - r;
        let f = |i: usize, j: usize| ((3 * i + 5 * j) % 7) as f64 / 7.0 - 0.3;
        let head: Vec<Vec<f64>> = (0..m).map(|k| vec![f(k, 0), f(k, 1)]).collect();
        let q: Vec<Vec<f64>> = (0..m).map(|k| vec![f(k, 2), f(k, 3)]).collect();
        let a: Vec<DenseMatrix<f64>> = (0..m)
            .map(|k| DenseMatrix::from_fn(r, r, |i, j| f(k + i, j + 4)))
            .collect();
        let g_last = DenseMatrix::from_fn(r, r, |i, j| f(i + 9, j));
        let mut upper = UpperRows::with_capacity(n);
        for k in 0..n {
            upper.push(2.0 + k as f64, (k + 1..n).map(|j| f(k, j) + 0.1).collect());
        }
        let rd = upper.to_dense();
        let t = rd.submatrix(m, m, r, r);
        let p_last = crate::matrix::dense_invert(&t).unwrap().matmul(&g_last);
        let p = inverse_row_generators(r, |k| head[k].clone(), &a, &p_last, &upper, None);
        let got = GreenGenerators::new(n, r, p, q.clone(), a.clone(), p_last).unwrap();
        let g = GreenGenerators::new(n, r, head, q, a, g_last).unwrap();
        let expected = crate::matrix::dense_invert(&rd)
            .unwrap()
            .matmul(&g.reconstruct_structured())
            .tril(r as isize - 1);
        assert!(got.reconstruct_structured().sub(&expected).max_abs() < 1e-13);
    }
}
