//! Unpivoted LU of lower band matrices and the LU route to the Green
//! generators of the inverse.
//!
//! Step `k` eliminates below the pivot `gamma_k` of the window formed by the
//! `r` carried rows and row `k + r` of `A`, with multipliers `f_k`. The last
//! `r x r` block is split as `T S` with `T` unit lower triangular. Then
//! `L^{-1} = (I (+) T^{-1}) L~_{n-r} ... L~_1` with
//! `L_k = [1 0; -f_k I_r]`, whose generators are
//!
//! ```text
//! p(k) = e_1^T,   a(k) = [-c_k  I_{r-1}; -alpha_k  0],   q(k) = e_r,
//! ```
//!
//! where `f_k = (c_k; alpha_k)`. These blocks are assembled, not computed,
//! so their unit and zero parts are exact. `A^{-1} = R^{-1} L^{-1}` then
//! follows as in the QR route.
//!
//! No pivoting is done: every leading principal minor of `A` must be
//! nonzero (strong regularity). Pivots at or below `n eps |A|_inf` are
//! reported as [`Error::ZeroPivot`].

use crate::error::{Error, Result};
use crate::green::{ClosingBlock, GreenGenerators, ProductOrder, TransformProduct};
use crate::matrix::{BandedMatrix, DenseMatrix};
use crate::recursion::{inverse_row_generators, UpperRows};
use crate::scalar::{singularity_threshold, Real};

/// `A = L R` with unit lower triangular `L` of lower bandwidth `r`.
#[derive(Debug, Clone)]
pub struct LuFactorization<T> {
    n: usize,
    r: usize,
    upper_band: Option<usize>,
    f: Vec<Vec<T>>,
    t: DenseMatrix<T>,
    t_inv: DenseMatrix<T>,
    s: DenseMatrix<T>,
    upper: UpperRows<T>,
    growth: T,
}

impl<T: Real> LuFactorization<T> {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    /// Multipliers `f_k = L(k+1:k+r, k)`, `k = 1..n-r`.
    pub fn multipliers(&self) -> &[Vec<T>] {
        &self.f
    }

    /// Unit lower triangular closing block `T = L(n-r+1:n, n-r+1:n)`.
    pub fn closing_lower(&self) -> &DenseMatrix<T> {
        &self.t
    }

    /// `T^{-1}`.
    pub fn closing_lower_inverse(&self) -> &DenseMatrix<T> {
        &self.t_inv
    }

    /// Upper triangular closing block `S = R(n-r+1:n, n-r+1:n)`.
    pub fn closing_upper(&self) -> &DenseMatrix<T> {
        &self.s
    }

    /// `R` by rows; row lengths are capped at `u` in the two-sided case.
    pub fn r_factor(&self) -> &UpperRows<T> {
        &self.upper
    }

    /// Pivots `gamma_k = R(k, k)`.
    pub fn pivots(&self) -> &[T] {
        &self.upper.diag
    }

    /// `max_k |Y_k|_inf / |A|_inf` over the carried windows.
    pub fn growth(&self) -> T {
        self.growth
    }

    pub fn dense_l(&self) -> DenseMatrix<T> {
        let (n, r) = (self.n, self.r);
        let m = n - r;
        let mut l = DenseMatrix::identity(n);
        for (k, f) in self.f.iter().enumerate() {
            for (i, &v) in f.iter().enumerate() {
                l[(k + 1 + i, k)] = v;
            }
        }
        l.set_submatrix(m, m, &self.t);
        l
    }

    pub fn dense_r(&self) -> DenseMatrix<T> {
        self.upper.to_dense()
    }

    /// `L^{-1}` as a descending product of the blocks `[1 0; -f_k I_r]` and
    /// the trailing block `T^{-1}`.
    pub fn inverse_lower_transforms(&self) -> TransformProduct<T> {
        let factors = self.f.iter().map(|f| elimination_block(f)).collect();
        TransformProduct::descending(self.n, self.r, factors, self.t_inv.clone()).expect("factor shapes are consistent")
    }

    /// Green generators of `A^{-1}`.
    pub fn inverse_generators(&self) -> GreenGenerators<T> {
        let (n, r) = (self.n, self.r);
        let a: Vec<DenseMatrix<T>> = self.f.iter().map(|f| companion_block(f)).collect();
        let mut e_r = vec![T::zero(); r];
        e_r[r - 1] = T::one();
        let q = vec![e_r; n - r];
        let mut e_1 = vec![T::zero(); r];
        e_1[0] = T::one();
        let p_last = upper_solve(&self.s, &self.t_inv);
        let p = inverse_row_generators(r, |_| e_1.clone(), &a, &p_last, &self.upper, self.upper_band);
        GreenGenerators::new(n, r, p, q, a, p_last).expect("generator shapes are consistent")
    }
}

/// `[1 0; -f I_r]`.
fn elimination_block<T: Real>(f: &[T]) -> DenseMatrix<T> {
    let r = f.len();
    let mut b = DenseMatrix::identity(r + 1);
    for (i, &v) in f.iter().enumerate() {
        b[(i + 1, 0)] = -v;
    }
    b
}

/// Lower right `r x r` part of [`elimination_block`] read as `a(k)`:
/// first column `-f`, then the first `r - 1` columns of `I_r`.
fn companion_block<T: Real>(f: &[T]) -> DenseMatrix<T> {
    let r = f.len();
    DenseMatrix::from_fn(r, r, |i, j| {
        if j == 0 {
            -f[i]
        } else if i + 1 == j {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// `S^{-1} B` for upper triangular `S` with nonzero diagonal.
fn upper_solve<T: Real>(s: &DenseMatrix<T>, b: &DenseMatrix<T>) -> DenseMatrix<T> {
    let n = s.rows();
    let mut x = b.clone();
    for i in (0..n).rev() {
        let mut row = x.row(i).to_vec();
        for j in i + 1..n {
            let sij = s[(i, j)];
            for (v, &xj) in row.iter_mut().zip(x.row(j)) {
                *v -= sij * xj;
            }
        }
        let inv = T::one() / s[(i, i)];
        for (dst, v) in x.row_mut(i).iter_mut().zip(row) {
            *dst = v * inv;
        }
    }
    x
}

/// Inverse of a unit lower triangular matrix.
fn unit_lower_inverse<T: Real>(l: &DenseMatrix<T>) -> DenseMatrix<T> {
    let n = l.rows();
    let mut x = DenseMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            let lij = l[(i, j)];
            if lij != T::zero() {
                let src = x.row(j).to_vec();
                for (v, s) in x.row_mut(i).iter_mut().zip(src) {
                    *v -= lij * s;
                }
            }
        }
    }
    x
}

fn row_sum_max<T: Real>(rows: &[Vec<T>]) -> T {
    rows.iter()
        .map(|row| row.iter().fold(T::zero(), |acc, x| acc + x.abs()))
        .fold(T::zero(), T::max)
}

fn factor<T: Real>(a: &BandedMatrix<T>, upper_band: Option<usize>) -> Result<LuFactorization<T>> {
    let (n, r) = (a.n(), a.r_lower());
    let m = n - r;
    let scale = a.norm_inf();
    let tol = singularity_threshold(n, scale);
    let pivot_ok = |g: T| g.abs() > tol;
    // Rows of the carried window start at column k. With a banded upper
    // part the window has u + 1 columns; entries right of it are untouched
    // by elimination and fetched from A when the window moves.
    let carried = match upper_band {
        Some(u) => u,
        None => n,
    };
    let mut y: Vec<Vec<T>> = (0..r).map(|i| (0..carried).map(|c| a.get(i, c)).collect()).collect();
    let mut upper = UpperRows::with_capacity(n);
    let mut f = Vec::with_capacity(m);
    let mut growth = T::zero();
    for k in 0..m {
        if let Some(u) = upper_band {
            for (i, row) in y.iter_mut().enumerate() {
                row.push(a.get(k + i, k + u));
            }
        }
        let wc = y[0].len();
        let head: Vec<T> = (0..wc).map(|c| a.get(k + r, k + c)).collect();
        y.push(head);
        let gamma = y[0][0];
        if !pivot_ok(gamma) {
            return Err(Error::ZeroPivot { index: k + 1 });
        }
        let top = y.remove(0);
        let x_row = &top[1..];
        let inv = T::one() / gamma;
        let mut fk = Vec::with_capacity(r);
        for row in &mut y {
            let l = row[0] * inv;
            row.remove(0);
            for (v, &xj) in row.iter_mut().zip(x_row) {
                *v -= l * xj;
            }
            fk.push(l);
        }
        let len = x_row.len().min(n - k - 1);
        upper.push(gamma, x_row[..len].to_vec());
        f.push(fk);
        if scale > T::zero() {
            growth = growth.max(row_sum_max(&y) / scale);
        }
    }

    // Closing block Y_{n-r}(:, 0..r), completed from A where the banded
    // window is narrower than r.
    let mut u_blk = DenseMatrix::from_fn(r, r, |i, c| if c < y[i].len() { y[i][c] } else { a.get(m + i, m + c) });
    let mut t = DenseMatrix::identity(r);
    for j in 0..r {
        let piv = u_blk[(j, j)];
        if !pivot_ok(piv) {
            return Err(Error::ZeroPivot { index: m + j + 1 });
        }
        for i in j + 1..r {
            let l = u_blk[(i, j)] / piv;
            t[(i, j)] = l;
            u_blk[(i, j)] = T::zero();
            for c in j + 1..r {
                let v = u_blk[(j, c)];
                u_blk[(i, c)] -= l * v;
            }
        }
    }
    for j in 0..r {
        let len = (r - j - 1).min(upper_band.unwrap_or(usize::MAX));
        upper.push(u_blk[(j, j)], u_blk.row(j)[j + 1..j + 1 + len].to_vec());
    }
    let t_inv = unit_lower_inverse(&t);
    Ok(LuFactorization {
        n,
        r,
        upper_band,
        f,
        t,
        t_inv,
        s: u_blk,
        upper,
        growth,
    })
}

/// LU of a lower band matrix, treating the part above the diagonal as full.
pub fn lu_factor_lower_band<T: Real>(a: &BandedMatrix<T>) -> Result<LuFactorization<T>> {
    factor(a, None)
}

/// LU of a two-sided band matrix; `R` keeps the upper bandwidth of `A`.
pub fn lu_factor_two_sided<T: Real>(a: &BandedMatrix<T>) -> Result<LuFactorization<T>> {
    if !a.is_two_sided() {
        return Err(Error::InvalidArgument(
            "two-sided LU needs a limited upper bandwidth".into(),
        ));
    }
    factor(a, Some(a.upper_count()))
}

pub fn invert_lower_band_lu<T: Real>(a: &BandedMatrix<T>) -> Result<GreenGenerators<T>> {
    Ok(lu_factor_lower_band(a)?.inverse_generators())
}

pub fn invert_two_sided_lu<T: Real>(a: &BandedMatrix<T>) -> Result<GreenGenerators<T>> {
    Ok(lu_factor_two_sided(a)?.inverse_generators())
}

/// Elementary factors of `L^{-1}` read entrywise from a unit lower
/// triangular `L` of lower bandwidth `r`.
///
/// With `g_k = L(k+r, k:k+r-1)` and `L_k = [I_r 0; -g_k 1]` embedded at rows
/// `k..k+r`,
///
/// ```text
/// L^{-1} = L~_{n-r} ... L~_1 (L(1:r, 1:r)^{-1} (+) I_{n-r}).
/// ```
///
/// The leading block is needed unless the first `r` rows of `L` are
/// identity rows, so the product is returned with
/// [`ClosingBlock::Leading`].
pub fn elementary_factors_from_entrywise<T: Real>(l: &DenseMatrix<T>, r: usize) -> Result<TransformProduct<T>> {
    let n = l.rows();
    if !l.is_square() || r == 0 || n <= r {
        return Err(Error::NotUnitLowerBand { r });
    }
    for i in 0..n {
        for j in 0..n {
            let v = l[(i, j)];
            let ok = if i == j {
                v == T::one()
            } else if j > i || i - j > r {
                v == T::zero()
            } else {
                v.is_finite()
            };
            if !ok {
                return Err(Error::NotUnitLowerBand { r });
            }
        }
    }
    let factors = (0..n - r)
        .map(|k| {
            let mut b = DenseMatrix::identity(r + 1);
            for c in 0..r {
                b[(r, c)] = -l[(k + r, k + c)];
            }
            b
        })
        .collect();
    let lead = unit_lower_inverse(&l.submatrix(0, 0, r, r));
    TransformProduct::new(n, r, factors, lead, ProductOrder::Descending, ClosingBlock::Leading)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::UpperBandwidth;

    fn banded(d: &DenseMatrix<f64>, r: usize, u: UpperBandwidth) -> BandedMatrix<f64> {
        BandedMatrix::from_dense(d, r, u).unwrap()
    }

    #[test]
    fn identity() {
        let a = banded(&DenseMatrix::identity(6), 2, UpperBandwidth::Full);
        let f = lu_factor_lower_band(&a).unwrap();
        assert!(f.multipliers().iter().flatten().all(|&x| x == 0.0));
        assert!(f.pivots().iter().all(|&g| g == 1.0));
        assert_eq!(f.dense_r(), DenseMatrix::identity(6));
        assert_eq!(
            f.inverse_generators().reconstruct_structured(),
            DenseMatrix::identity(6).tril(1)
        );
    }

    #[test]
    fn bidiagonal_against_hand_elimination() {
        let n = 5;
        let d = DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let f = lu_factor_lower_band(&banded(&d, 1, UpperBandwidth::Full)).unwrap();
        // pivots stay 2, multipliers 1/2
        for fk in f.multipliers() {
            assert_eq!(fk, &vec![0.5]);
        }
        assert!(f.pivots().iter().all(|&g| g == 2.0));
        assert_eq!(f.dense_l().matmul(&f.dense_r()), d);
    }

    #[test]
    fn lemma_structure_is_exact() {
        let d = DenseMatrix::from_fn(7, 7, |i, j| {
            if i > j + 2 {
                0.0
            } else if i == j {
                5.0
            } else {
                ((i * 3 + j) % 4) as f64 * 0.25 + 0.1
            }
        });
        let g = invert_lower_band_lu(&banded(&d, 2, UpperBandwidth::Full)).unwrap();
        for (a, q) in g.a().iter().zip(g.q()) {
            assert_eq!(q, &vec![0.0, 1.0]);
            assert_eq!(a[(0, 1)], 1.0);
            assert_eq!(a[(1, 1)], 0.0);
        }
    }

    #[test]
    fn zero_pivot_index() {
        let mut d = DenseMatrix::identity(5);
        d[(1, 1)] = 0.0;
        d[(1, 2)] = 1.0;
        d[(2, 1)] = 1.0;
        let a = banded(&d, 1, UpperBandwidth::Limited(1));
        assert_eq!(invert_lower_band_lu(&a).unwrap_err(), Error::ZeroPivot { index: 2 });
        assert_eq!(invert_two_sided_lu(&a).unwrap_err(), Error::ZeroPivot { index: 2 });
        // closing block pivot
        let mut d = DenseMatrix::identity(4);
        d[(3, 3)] = 0.0;
        let a = banded(&d, 2, UpperBandwidth::Full);
        assert_eq!(lu_factor_lower_band(&a).unwrap_err(), Error::ZeroPivot { index: 4 });
    }

    #[test]
    fn entrywise_factors_need_leading_block() {
        // r = 2, n = 3: L(2, 1) != 0 is not reachable by the g_k factors alone.
        let l = DenseMatrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.5, 1.0, 0.0], vec![0.25, -2.0, 1.0]]).unwrap();
        let t = elementary_factors_from_entrywise(&l, 2).unwrap();
        let prod = t.expand().matmul(&l);
        assert!(prod.sub(&DenseMatrix::identity(3)).max_abs() < 1e-15);
    }

    #[test]
    fn entrywise_rejects_non_unit_band() {
        let mut l = DenseMatrix::<f64>::identity(4);
        l[(3, 0)] = 1.0;
        assert_eq!(
            elementary_factors_from_entrywise(&l, 2).unwrap_err(),
            Error::NotUnitLowerBand { r: 2 }
        );
        let l = DenseMatrix::<f64>::from_diagonal(&[1.0, 2.0, 1.0]);
        assert!(elementary_factors_from_entrywise(&l, 1).is_err());
    }
}
