use crate::error::{Error, Result};
use crate::green::GreenGenerators;
use crate::matrix::{axpy, DenseMatrix};
use crate::scalar::Real;

/// Generators of `C = S B` for upper triangular `S` and a lower Green `B`.
///
/// `q` and `a` carry over unchanged. With `m = n - r` (1-based `k`),
/// `p_C(k) = S(k, k:n) P_k = s_k p(k) + S(k, k+1:n) P_{k+1} a(k)` and the
/// last block row is `S(m+1:n, m+1:n) p_last`. The row products against the
/// tail stacks are evaluated by Horner's rule, starting from the last
/// nonzero of each row of `S`, so no stack is formed. The cost is
/// `O(n^2 r^2)` for a full `S` and `O(n b r^2)` when `S` has `b` nonzero
/// superdiagonals.
pub fn multiply_upper_triangular<T: Real>(s: &DenseMatrix<T>, g: &GreenGenerators<T>) -> Result<GreenGenerators<T>> {
    let (n, r) = (g.n(), g.r());
    if s.rows() != n || s.cols() != n {
        return Err(Error::Shape(format!(
            "multiplier is {}x{}, generators describe order {n}",
            s.rows(),
            s.cols()
        )));
    }
    if !s.is_upper_triangular() {
        return Err(Error::NotUpperTriangular);
    }
    let m = n - r;
    let p_last = s.submatrix(m, m, r, r).matmul(g.p_last());

    let mut p = Vec::with_capacity(m);
    for k in 0..m {
        let row = s.row(k);
        let last_nz = row.iter().rposition(|&x| x != T::zero()).unwrap_or(k);
        // v = S(k, k+1:n) P_{k+1}, accumulated from the bottom of the stack.
        let mut v = vec![T::zero(); r];
        let mut top = last_nz.min(m - 1);
        if last_nz >= m {
            v = g.p_last().left_mul_vec(&row[m..]);
            top = m - 1;
        } else if last_nz > k {
            axpy(row[last_nz], &g.p()[last_nz], &mut v);
            top = last_nz - 1;
        }
        if last_nz > k {
            for j in (k + 1..=top).rev() {
                v = g.a()[j].left_mul_vec(&v);
                axpy(row[j], &g.p()[j], &mut v);
            }
            v = g.a()[k].left_mul_vec(&v);
        }
        axpy(row[k], &g.p()[k], &mut v);
        p.push(v);
    }
    GreenGenerators::new(n, r, p, g.q().to_vec(), g.a().to_vec(), p_last)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, r: usize) -> GreenGenerators<f64> {
        let m = n - r;
        let f = |i: usize, j: usize, salt: usize| ((i * 7 + j * 3 + salt) % 11) as f64 / 11.0 - 0.4;
        GreenGenerators::new(
            n,
            r,
            (0..m).map(|k| (0..r).map(|j| f(k, j, 1)).collect()).collect(),
            (0..m).map(|k| (0..r).map(|j| f(k, j, 2)).collect()).collect(),
            (0..m)
                .map(|k| DenseMatrix::from_fn(r, r, |i, j| f(k + i, j, 3)))
                .collect(),
            DenseMatrix::from_fn(r, r, |i, j| f(i, j, 4)),
        )
        .unwrap()
    }

    #[test]
    fn identity_multiplier() {
        let g = sample(7, 2);
        assert_eq!(multiply_upper_triangular(&DenseMatrix::identity(7), &g).unwrap(), g);
    }

    #[test]
    fn scalar_multiplier_scales_p_only() {
        let g = sample(6, 2);
        let s = DenseMatrix::from_diagonal(&[2.0; 6]);
        let c = multiply_upper_triangular(&s, &g).unwrap();
        for k in 0..4 {
            let doubled: Vec<f64> = g.p()[k].iter().map(|x| 2.0 * x).collect();
            assert_eq!(c.p()[k], doubled);
        }
        assert_eq!(c.p_last(), &g.p_last().scaled(2.0));
        assert_eq!(c.q(), g.q());
        assert_eq!(c.a(), g.a());
    }

    #[test]
    fn matches_dense_product() {
        for (n, r) in [(5, 1), (8, 2), (10, 3)] {
            let g = sample(n, r);
            let s = DenseMatrix::from_fn(n, n, |i, j| if j >= i { ((i + 2 * j) % 5) as f64 - 1.5 } else { 0.0 });
            // uncovered part of B set to zero: the product's covered part
            // only reads covered entries of B
            let b = g.reconstruct_structured();
            let expected = s.matmul(&b).tril(r as isize - 1);
            let got = multiply_upper_triangular(&s, &g).unwrap().reconstruct_structured();
            assert!(got.sub(&expected).max_abs() < 1e-12, "n={n} r={r}");
        }
    }

    #[test]
    fn banded_multiplier_skips_zero_tail() {
        let (n, r) = (9, 2);
        let g = sample(n, r);
        let s = DenseMatrix::from_fn(n, n, |i, j| if j >= i && j <= i + 1 { 1.0 + i as f64 } else { 0.0 });
        let expected = s.matmul(&g.reconstruct_structured()).tril(r as isize - 1);
        let got = multiply_upper_triangular(&s, &g).unwrap().reconstruct_structured();
        assert!(got.sub(&expected).max_abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_multipliers() {
        let g = sample(5, 2);
        assert!(matches!(
            multiply_upper_triangular(&DenseMatrix::identity(4), &g),
            Err(Error::Shape(_))
        ));
        let mut s = DenseMatrix::identity(5);
        s[(3, 1)] = 1.0;
        assert_eq!(multiply_upper_triangular(&s, &g), Err(Error::NotUpperTriangular));
    }
}
