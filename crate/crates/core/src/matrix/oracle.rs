//! Dense reference routines. These are cubic-cost and only serve to verify
//! the structured algorithms and to provide the classical baselines in the
//! benchmarks.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::matrix::dense::axpy;
use crate::matrix::householder::Reflector;
use crate::matrix::DenseMatrix;
use crate::scalar::{singularity_threshold, Real};

const INVERT_PANEL: usize = 48;

/// Inverse by Gauss-Jordan elimination with partial (row) pivoting.
///
/// Fails with [`Error::Singular`] when a pivot falls below
/// `n * eps * |A|_inf`.
pub fn dense_invert<T: Real>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "cannot invert a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let tol = singularity_threshold(n, m.norm_inf());
    // In-place Gauss-Jordan: column k of the identity takes the place of
    // column k of A once eliminated. Steps are grouped in panels of
    // INVERT_PANEL columns; within a panel only the panel columns are
    // eliminated, which leaves there the combined transform E of the panel
    // steps. E is then applied to all other columns at once, so each row is
    // streamed once per panel rather than once per step.
    let mut a: Vec<Vec<T>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut swaps = Vec::with_capacity(n);
    let mut xp: Vec<Vec<T>> = Vec::with_capacity(INVERT_PANEL);
    for k0 in (0..n).step_by(INVERT_PANEL) {
        let k1 = (k0 + INVERT_PANEL).min(n);
        for k in k0..k1 {
            let (piv, pmax) =
                (k..n)
                    .map(|i| (i, a[i][k].abs()))
                    .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= tol {
                return Err(Error::Singular { index: k + 1 });
            }
            a.swap(k, piv);
            swaps.push(piv);
            let inv_p = T::one() / a[k][k];
            let (before, rest) = a.split_at_mut(k);
            let (pivot_row, after) = rest.split_first_mut().expect("pivot row");
            pivot_row[k] = T::one();
            let prow = &mut pivot_row[k0..k1];
            for x in prow.iter_mut() {
                *x *= inv_p;
            }
            for row in before.iter_mut().chain(after.iter_mut()) {
                let f = row[k];
                if f != T::zero() {
                    row[k] = T::zero();
                    axpy(-f, prow, &mut row[k0..k1]);
                }
            }
        }
        // apply E to the columns outside the panel
        xp.clear();
        xp.extend(a[k0..k1].iter().cloned());
        for (i, row) in a.iter_mut().enumerate() {
            let pivot = (k0..k1).contains(&i);
            let coef: Vec<T> = row[k0..k1].to_vec();
            let (left, rest) = row.split_at_mut(k0);
            let right = &mut rest[k1 - k0..];
            if pivot {
                left.iter_mut().for_each(|x| *x = T::zero());
                right.iter_mut().for_each(|x| *x = T::zero());
            }
            for (c, src) in coef.iter().zip(&xp) {
                if *c != T::zero() {
                    axpy(*c, &src[..k0], left);
                    axpy(*c, &src[k1..], right);
                }
            }
        }
    }
    // row swaps of A become column swaps of the inverse, in reverse order
    for (k, &piv) in swaps.iter().enumerate().rev() {
        if piv != k {
            for row in a.iter_mut() {
                row.swap(k, piv);
            }
        }
    }
    Ok(DenseMatrix::from_fn(n, n, |i, j| a[i][j]))
}

/// Number of complete-pivoting elimination pivots exceeding
/// `tol * |largest pivot|`.
pub fn numerical_rank<T: Real>(m: &DenseMatrix<T>, tol: T) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w: Vec<Vec<T>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut first = T::zero();
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best = (k, k, T::zero());
        for (i, row) in w.iter().enumerate().skip(k) {
            for &c in &col_perm[k..] {
                let v = row[c].abs();
                if v > best.2 {
                    best = (i, c, v);
                }
            }
        }
        let (pi, pc, pv) = best;
        if k == 0 {
            first = pv;
        }
        if pv == T::zero() || pv <= tol * first {
            break;
        }
        rank += 1;
        w.swap(k, pi);
        let cpos = col_perm[k..].iter().position(|&c| c == pc).expect("pivot column") + k;
        col_perm.swap(k, cpos);
        let (top, bottom) = w.split_at_mut(k + 1);
        let prow = &top[k];
        let pivot = prow[pc];
        for row in bottom.iter_mut() {
            let f = row[pc] / pivot;
            if f != T::zero() {
                for &c in &col_perm[k..] {
                    row[c] -= f * prow[c];
                }
            }
        }
    }
    rank
}

/// Power-iteration estimate of the spectral norm (largest singular value).
pub fn norm2_estimate<T: Real>(m: &DenseMatrix<T>) -> T {
    let n = m.cols();
    if n == 0 || m.rows() == 0 {
        return T::zero();
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(0x05ee_d0f2_0042);
    let mut x: Vec<T> = (0..n)
        .map(|_| T::from_f64_lossy(0.5 + unit_f64(rng.next_u64())))
        .collect();
    normalize(&mut x);
    let mut sigma = T::zero();
    let tol = T::from_f64_lossy(1e-10);
    for _ in 0..500 {
        let y = m.mul_vec(&x);
        let next = norm(&y);
        let mut z = m.transpose_mul_vec(&y);
        if norm(&z) == T::zero() {
            return next;
        }
        normalize(&mut z);
        x = z;
        let converged = (next - sigma).abs() <= tol * next;
        sigma = next;
        if converged {
            break;
        }
    }
    sigma
}

/// Spectral condition number estimate `|A|_2 |A^{-1}|_2` from the dense inverse.
pub fn condition_number_2<T: Real>(m: &DenseMatrix<T>) -> Result<T> {
    let inv = dense_invert(m)?;
    Ok(norm2_estimate(m) * norm2_estimate(&inv))
}

/// Dense Householder QR, `m = q r` with orthogonal `q`.
pub fn dense_householder_qr<T: Real>(m: &DenseMatrix<T>) -> (DenseMatrix<T>, DenseMatrix<T>) {
    let (rows, cols) = (m.rows(), m.cols());
    // Work on columns so reflectors act on contiguous storage.
    let mut work: Vec<Vec<T>> = (0..cols).map(|j| m.column(j)).collect();
    let mut reflectors = Vec::new();
    for k in 0..cols.min(rows.saturating_sub(1)) {
        let (h, x) = Reflector::annihilating(&work[k][k..]);
        work[k][k] = x;
        for v in work[k][k + 1..].iter_mut() {
            *v = T::zero();
        }
        for col in work.iter_mut().skip(k + 1) {
            h.apply_vec(&mut col[k..]);
        }
        reflectors.push((k, h));
    }
    let r = DenseMatrix::from_fn(rows, cols, |i, j| if i <= j { work[j][i] } else { T::zero() });
    // Q = H_0 H_1 ... applied to the identity, column by column.
    let mut q_cols: Vec<Vec<T>> = (0..rows)
        .map(|j| (0..rows).map(|i| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    for col in q_cols.iter_mut() {
        for (k, h) in reflectors.iter().rev() {
            h.apply_vec(&mut col[*k..]);
        }
    }
    let q = DenseMatrix::from_fn(rows, rows, |i, j| q_cols[j][i]);
    (q, r)
}

/// Inverse via dense Householder QR: `A^{-1} = R^{-1} Q^T`.
pub fn dense_qr_invert<T: Real>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "cannot invert a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let tol = singularity_threshold(n, m.norm_inf());
    let (q, r) = dense_householder_qr(m);
    if let Some(k) = (0..n).find(|&k| r[(k, k)].abs() <= tol) {
        return Err(Error::Singular { index: k + 1 });
    }
    let mut x = q.transpose();
    solve_upper_in_place(&r, &mut x);
    Ok(x)
}

/// Overwrites `b` with `U^{-1} b` for upper triangular `u`.
pub(crate) fn solve_upper_in_place<T: Real>(u: &DenseMatrix<T>, b: &mut DenseMatrix<T>) {
    let n = u.rows();
    let cols = b.cols();
    let mut rows: Vec<Vec<T>> = (0..n).map(|i| b.row(i).to_vec()).collect();
    for i in (0..n).rev() {
        let (head, tail) = rows.split_at_mut(i + 1);
        let target = &mut head[i];
        for (off, src) in tail.iter().enumerate() {
            let f = u[(i, i + 1 + off)];
            if f != T::zero() {
                axpy(-f, src, target);
            }
        }
        let d = T::one() / u[(i, i)];
        for v in target.iter_mut() {
            *v *= d;
        }
    }
    for (i, row) in rows.iter().enumerate() {
        b.row_mut(i)[..cols].copy_from_slice(row);
    }
}

/// Maps a raw 64-bit draw to `[0, 1)` using its top 53 bits.
#[inline]
pub(crate) fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &x| acc.hypot(x))
}

fn normalize<T: Real>(v: &mut [T]) {
    let s = norm(v);
    if s > T::zero() {
        for x in v.iter_mut() {
            *x /= s;
        }
    }
}

impl<T: Real> DenseMatrix<T> {
    /// `M^T v`
    pub fn transpose_mul_vec(&self, v: &[T]) -> Vec<T> {
        self.left_mul_vec(v)
    }
}
