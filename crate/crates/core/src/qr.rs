//! Householder QR of lower band matrices and the QR route to the Green
//! generators of the inverse.
//!
//! Step `k` applies one `(r+1) x (r+1)` reflector `U_k` to the window formed
//! by the `r` carried rows `Y_{k-1}` and row `k + r` of `A`. Its first row
//! becomes row `k` of `R`; the rest is carried on as `Y_k`. After `n - r`
//! steps the remaining `r x r` block is finished by a dense Householder QR.
//! Then `U^* A = R` with `U^* = (I (+) U^_closing) ... U~_2 U~_1`, which is
//! lower Green of order `r` with generators read straight off the `U_k`,
//! and `A^{-1} = R^{-1} U^*` follows by a back substitution on the
//! generators.
//!
//! For a matrix with upper bandwidth `u`, `R` has upper bandwidth `r + u`.
//! The two-sided routines exploit that with fixed-width windows and
//! truncated tail stacks, for `O(n r (r + u)^2)` work overall.

use crate::error::{Error, Result};
use crate::green::{GreenGenerators, TransformProduct};
use crate::matrix::{BandedMatrix, DenseMatrix, Reflector};
use crate::recursion::{check_pivots, inverse_row_generators, singular, UpperRows};
use crate::scalar::Real;

/// `A = U R` in factored form.
#[derive(Debug, Clone)]
pub struct QrFactorization<T> {
    n: usize,
    r: usize,
    /// Upper bandwidth of `A` when the two-sided sweep was used.
    upper_band: Option<usize>,
    steps: Vec<Reflector<T>>,
    closing: Vec<Reflector<T>>,
    upper: UpperRows<T>,
    scale: T,
}

impl<T: Real> QrFactorization<T> {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    /// `R` by rows. Row lengths are capped at `r + u` in the two-sided case.
    pub fn r_factor(&self) -> &UpperRows<T> {
        &self.upper
    }

    /// Diagonal `x_k = R(k, k)`.
    pub fn diag(&self) -> &[T] {
        &self.upper.diag
    }

    /// The `(r+1) x (r+1)` blocks `U_k`, `k = 1..n-r`. They are symmetric
    /// reflectors, so `U_k^* = U_k`.
    pub fn step_blocks(&self) -> Vec<DenseMatrix<T>> {
        self.steps.iter().map(Reflector::to_dense).collect()
    }

    /// The shrinking closing reflectors, of sizes `r, r-1, .., 2`.
    pub fn closing_blocks(&self) -> Vec<DenseMatrix<T>> {
        self.closing.iter().map(Reflector::to_dense).collect()
    }

    /// `r x r` unitary `U^*_closing` with `U^*_closing Y = T` for the last
    /// carried block `Y` and `T = R(n-r+1:n, n-r+1:n)`.
    pub fn closing_adjoint(&self) -> DenseMatrix<T> {
        let r = self.r;
        let mut rows: Vec<Vec<T>> = (0..r)
            .map(|i| (0..r).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        for (j, h) in self.closing.iter().enumerate() {
            h.apply_rows(&mut rows[j..]);
        }
        DenseMatrix::from_rows(&rows).expect("square block")
    }

    /// `U^*` as a descending product of elementary transforms.
    pub fn adjoint_transforms(&self) -> TransformProduct<T> {
        TransformProduct::descending(self.n, self.r, self.step_blocks(), self.closing_adjoint())
            .expect("factor shapes are consistent")
    }

    pub fn dense_r(&self) -> DenseMatrix<T> {
        self.upper.to_dense()
    }

    pub fn dense_u(&self) -> DenseMatrix<T> {
        self.adjoint_transforms().expand().transpose()
    }

    /// Green generators of `A^{-1}`.
    ///
    /// The result is in right normal form: `a(k) a(k)^* + q(k) q(k)^* = I_r`.
    pub fn inverse_generators(&self) -> Result<GreenGenerators<T>> {
        check_pivots(&self.upper, self.scale, singular)?;
        let (n, r) = (self.n, self.r);
        let m = n - r;
        let blocks = self.step_blocks();
        let p_head: Vec<Vec<T>> = blocks.iter().map(|u| u.row(0)[..r].to_vec()).collect();
        let a: Vec<DenseMatrix<T>> = blocks.iter().map(|u| u.submatrix(1, 0, r, r)).collect();
        let q: Vec<Vec<T>> = blocks.iter().map(|u| u.submatrix(1, r, r, 1).column(0)).collect();

        // T^{-1} U^*_closing, unrolled over the closing reflectors.
        let mut z = DenseMatrix::from_diagonal(&[T::one() / self.upper.diag[n - 1]]);
        for (j, h) in self.closing.iter().enumerate().rev() {
            let k = m + j;
            let s = r - j;
            let hd = h.to_dense();
            let za = z.matmul(&hd.submatrix(1, 0, s - 1, s));
            let xz = za.left_mul_vec(&self.upper.rows[k]);
            let inv = T::one() / self.upper.diag[k];
            let mut next = DenseMatrix::zeros(s, s);
            for (c, (&h0, &w)) in hd.row(0).iter().zip(&xz).enumerate() {
                next[(0, c)] = (h0 - w) * inv;
            }
            next.set_submatrix(1, 0, &za);
            z = next;
        }
        let width = self.upper_band.map(|u| r + u);
        let p = inverse_row_generators(r, |k| p_head[k].clone(), &a, &z, &self.upper, width);
        GreenGenerators::new(n, r, p, q, a, z)
    }
}

fn factor<T: Real>(a: &BandedMatrix<T>, upper_band: Option<usize>) -> QrFactorization<T> {
    let (n, r) = (a.n(), a.r_lower());
    let m = n - r;
    // window width: shrinking for a full upper part, fixed (zero padded past
    // column n) for a banded one
    let width = |k: usize| match upper_band {
        Some(u) => r + u + 1,
        None => n - k,
    };
    let carried = match upper_band {
        Some(u) => r + u,
        None => n,
    };
    let mut y: Vec<Vec<T>> = (0..r).map(|i| (0..carried).map(|c| a.get(i, c)).collect()).collect();
    let mut upper = UpperRows::with_capacity(n);
    let mut steps = Vec::with_capacity(m);
    for k in 0..m {
        let wc = width(k);
        for row in &mut y {
            row.resize(wc, T::zero());
        }
        y.push((0..wc).map(|c| a.get(k + r, k + c)).collect());
        let col: Vec<T> = y.iter().map(|row| row[0]).collect();
        let (h, x) = Reflector::annihilating(&col);
        h.apply_rows(&mut y);
        let top = y.remove(0);
        let len = (wc - 1).min(n - k - 1);
        upper.push(x, top[1..1 + len].to_vec());
        for row in &mut y {
            row.remove(0);
        }
        steps.push(h);
    }

    let mut blk: Vec<Vec<T>> = y
        .into_iter()
        .map(|mut row| {
            row.truncate(r);
            row
        })
        .collect();
    let mut closing = Vec::with_capacity(r.saturating_sub(1));
    for j in 0..r - 1 {
        let col: Vec<T> = blk[j..].iter().map(|row| row[j]).collect();
        let (h, x) = Reflector::annihilating(&col);
        let mut sub: Vec<Vec<T>> = blk[j..].iter().map(|row| row[j..].to_vec()).collect();
        h.apply_rows(&mut sub);
        for (dst, src) in blk[j..].iter_mut().zip(&sub) {
            dst[j..].copy_from_slice(src);
        }
        upper.push(x, sub[0][1..].to_vec());
        closing.push(h);
    }
    upper.push(blk[r - 1][r - 1], Vec::new());

    QrFactorization {
        n,
        r,
        upper_band,
        steps,
        closing,
        upper,
        scale: a.norm_inf(),
    }
}

/// QR of a lower band matrix, treating the part above the diagonal as full.
pub fn qr_factor_lower_band<T: Real>(a: &BandedMatrix<T>) -> QrFactorization<T> {
    factor(a, None)
}

/// QR of a two-sided band matrix with fixed-width windows.
pub fn qr_factor_two_sided<T: Real>(a: &BandedMatrix<T>) -> Result<QrFactorization<T>> {
    if !a.is_two_sided() {
        return Err(Error::InvalidArgument(
            "two-sided QR needs a limited upper bandwidth".into(),
        ));
    }
    Ok(factor(a, Some(a.upper_count())))
}

/// Green generators of `A^{-1}` for a lower band `A`, using full-length
/// rows of `R`.
pub fn invert_lower_band_qr<T: Real>(a: &BandedMatrix<T>) -> Result<GreenGenerators<T>> {
    qr_factor_lower_band(a).inverse_generators()
}

/// Green generators of `A^{-1}` for a two-sided band `A` in linear time.
pub fn invert_two_sided_qr<T: Real>(a: &BandedMatrix<T>) -> Result<GreenGenerators<T>> {
    qr_factor_two_sided(a)?.inverse_generators()
}
