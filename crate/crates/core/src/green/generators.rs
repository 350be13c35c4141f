use crate::error::{Error, Result};
use crate::matrix::{numerical_rank, DenseMatrix};
use crate::scalar::Real;

/// Block sizes used to view an `n x n` scalar matrix as an
/// `(n - r + 2) x (n - r + 2)` block matrix.
///
/// Row blocks: `m_0 = 0`, `m_1 = ... = m_{n-r} = 1`, `m_{n-r+1} = r`.
/// Column blocks: `n_0 = r`, `n_1 = ... = n_{n-r} = 1`, `n_{n-r+1} = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartitionMap {
    pub n: usize,
    pub r: usize,
    pub row_sizes: Vec<usize>,
    pub col_sizes: Vec<usize>,
}

impl BlockPartitionMap {
    pub fn new(n: usize, r: usize) -> Self {
        assert!(n > r && r > 0, "need n > r > 0");
        let m = n - r;
        let mut row_sizes = vec![0];
        row_sizes.extend(std::iter::repeat_n(1, m));
        row_sizes.push(r);
        let mut col_sizes = vec![r];
        col_sizes.extend(std::iter::repeat_n(1, m));
        col_sizes.push(0);
        Self {
            n,
            r,
            row_sizes,
            col_sizes,
        }
    }

    /// Block row holding scalar row `i` (0-based scalar, block index as in
    /// the partition above).
    #[inline]
    pub fn row_block(&self, i: usize) -> usize {
        (i + 1).min(self.n - self.r + 1)
    }

    /// Block column holding scalar column `j`.
    #[inline]
    pub fn col_block(&self, j: usize) -> usize {
        if j < self.r {
            0
        } else {
            j - self.r + 1
        }
    }

    /// The generators determine exactly the block strictly lower part, which
    /// in scalar indices is `j <= i + r - 1`.
    #[inline]
    pub fn is_covered(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.col_block(j) < self.row_block(i)
    }
}

/// Lower Green generators of order `r` for an `n x n` matrix.
///
/// With `m = n - r` and 0-based storage (`p[k]` is the generator numbered
/// `k + 1`), the covered part of the matrix is
/// `B(i, s - 1) = p(i) a(i - 1) ... a(s) q(s - 1)` in block indices, with
/// `q(0) = I_r` implicit and the last block row given by the `r x r` block
/// `p_last`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenGenerators<T> {
    n: usize,
    r: usize,
    p: Vec<Vec<T>>,
    q: Vec<Vec<T>>,
    a: Vec<DenseMatrix<T>>,
    p_last: DenseMatrix<T>,
}

impl<T: Real> GreenGenerators<T> {
    pub fn new(
        n: usize,
        r: usize,
        p: Vec<Vec<T>>,
        q: Vec<Vec<T>>,
        a: Vec<DenseMatrix<T>>,
        p_last: DenseMatrix<T>,
    ) -> Result<Self> {
        if r == 0 || n <= r {
            return Err(Error::InvalidBandwidth {
                n,
                r_lower: r,
                r_upper: 0,
            });
        }
        let m = n - r;
        let shape_err = |what: &str| Err(Error::Shape(format!("generator {what} has the wrong shape")));
        if p.len() != m || p.iter().any(|row| row.len() != r) {
            return shape_err("p");
        }
        if q.len() != m || q.iter().any(|col| col.len() != r) {
            return shape_err("q");
        }
        if a.len() != m || a.iter().any(|b| b.rows() != r || b.cols() != r) {
            return shape_err("a");
        }
        if p_last.rows() != r || p_last.cols() != r {
            return shape_err("p_last");
        }
        let finite = p.iter().chain(&q).flatten().all(|x| x.is_finite())
            && a.iter().flat_map(|b| b.as_slice()).all(|x| x.is_finite())
            && p_last.as_slice().iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidArgument("non-finite generator entry".into()));
        }
        Ok(Self { n, r, p, q, a, p_last })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    /// Rows `p(1) .. p(n - r)`.
    pub fn p(&self) -> &[Vec<T>] {
        &self.p
    }

    /// Columns `q(1) .. q(n - r)`.
    pub fn q(&self) -> &[Vec<T>] {
        &self.q
    }

    /// Transitions `a(1) .. a(n - r)`.
    pub fn a(&self) -> &[DenseMatrix<T>] {
        &self.a
    }

    /// The `r x r` block `p(n - r + 1)`.
    pub fn p_last(&self) -> &DenseMatrix<T> {
        &self.p_last
    }

    pub fn partition(&self) -> BlockPartitionMap {
        BlockPartitionMap::new(self.n, self.r)
    }

    /// Generator row for scalar row `i`: `p(i)` or a row of `p_last`.
    fn row_generator(&self, i: usize) -> &[T] {
        let m = self.n - self.r;
        if i < m {
            &self.p[i]
        } else {
            self.p_last.row(i - m)
        }
    }

    /// Entry `(i, j)` (0-based) of the covered region `j <= i + r - 1`.
    pub fn entry(&self, i: usize, j: usize) -> Result<T> {
        let part = self.partition();
        if !part.is_covered(i, j) {
            return Err(Error::OutsideCoveredRegion { i, j });
        }
        let (bi, bj) = (part.row_block(i), part.col_block(j));
        let mut v = self.row_generator(i).to_vec();
        // a(bi - 1) ... a(bj + 1), applied right to left onto the row.
        for t in (bj + 1..bi).rev() {
            v = self.a[t - 1].left_mul_vec(&v);
        }
        Ok(if bj == 0 {
            v[j]
        } else {
            crate::matrix::dot(&v, &self.q[bj - 1])
        })
    }

    /// Dense image of the covered part (`tril(B, r - 1)`), zero elsewhere.
    pub fn reconstruct_structured(&self) -> DenseMatrix<T> {
        let (n, r) = (self.n, self.r);
        let part = self.partition();
        let mut out = DenseMatrix::zeros(n, n);
        for i in 0..n {
            let bi = part.row_block(i);
            let mut v = self.row_generator(i).to_vec();
            for t in (1..bi).rev() {
                out[(i, r + t - 1)] = crate::matrix::dot(&v, &self.q[t - 1]);
                v = self.a[t - 1].left_mul_vec(&v);
            }
            out.row_mut(i)[..r].copy_from_slice(&v);
        }
        out
    }

    /// Tail stacks `P_1 .. P_{n-r+1}` (element `k - 1` is `P_k`), where
    /// `P_{n-r+1} = p_last` and `P_k = [p(k); P_{k+1} a(k)]`.
    ///
    /// `P_k` has `n - k + 1` rows and satisfies
    /// `B(k:n, k-1) = P_k q(k - 1)` in block indices.
    pub fn tail_stacks(&self) -> Vec<DenseMatrix<T>> {
        let m = self.n - self.r;
        let mut stacks = Vec::with_capacity(m + 1);
        let mut current = self.p_last.clone();
        stacks.push(current.clone());
        for k in (0..m).rev() {
            let below = current.matmul(&self.a[k]);
            let mut next = DenseMatrix::zeros(below.rows() + 1, self.r);
            next.row_mut(0).copy_from_slice(&self.p[k]);
            next.set_submatrix(1, 0, &below);
            current = next;
            stacks.push(current.clone());
        }
        stacks.reverse();
        stacks
    }

    /// Same generators converted to another scalar type.
    pub fn cast<U: Real>(&self) -> GreenGenerators<U> {
        let conv = |x: T| U::from_f64_lossy(x.to_f64_lossy());
        GreenGenerators {
            n: self.n,
            r: self.r,
            p: self
                .p
                .iter()
                .map(|row| row.iter().map(|&x| conv(x)).collect())
                .collect(),
            q: self
                .q
                .iter()
                .map(|col| col.iter().map(|&x| conv(x)).collect())
                .collect(),
            a: self.a.iter().map(|b| b.map(conv)).collect(),
            p_last: self.p_last.map(conv),
        }
    }
}

/// Whether every submatrix `B(k:n, 1:k+r-1)`, `k = 1..n-r` (1-based), has
/// numerical rank at most `r`.
pub fn check_green_rank<T: Real>(b: &DenseMatrix<T>, r: usize, tol: T) -> bool {
    assert!(b.is_square(), "check_green_rank needs a square matrix");
    let n = b.rows();
    (1..=n.saturating_sub(r)).all(|k| {
        let sub = b.submatrix(k - 1, 0, n - k + 1, k + r - 1);
        numerical_rank(&sub, tol) <= r
    })
}

/// Upper Green condition: `rank D(1:k+r-1, k:n) <= r` for `k = 1..n-r`.
pub fn check_upper_green_rank<T: Real>(b: &DenseMatrix<T>, r: usize, tol: T) -> bool {
    check_green_rank(&b.transpose(), r, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize, r: usize) -> GreenGenerators<f64> {
        let m = n - r;
        GreenGenerators::new(
            n,
            r,
            vec![vec![1.0; r]; m],
            vec![vec![1.0; r]; m],
            vec![DenseMatrix::from_fn(r, r, |_, _| 1.0); m],
            DenseMatrix::from_fn(r, r, |_, _| 1.0),
        )
        .unwrap()
    }

    #[test]
    fn partition_sizes() {
        let p = BlockPartitionMap::new(7, 3);
        assert_eq!(p.row_sizes, vec![0, 1, 1, 1, 1, 3]);
        assert_eq!(p.col_sizes, vec![3, 1, 1, 1, 1, 0]);
        assert_eq!(p.row_sizes.iter().sum::<usize>(), 7);
        assert_eq!(p.col_sizes.iter().sum::<usize>(), 7);
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(p.is_covered(i, j), j < i + 3, "({i},{j})");
            }
        }
    }

    #[test]
    fn scalar_example_n3_r1() {
        // p = (p1, p2), p_last = p3, q = (q1, q2), a = (a1, a2)
        let (p1, p2, p3, q1, q2, a1, a2) = (2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0);
        let g = GreenGenerators::new(
            3,
            1,
            vec![vec![p1], vec![p2]],
            vec![vec![q1], vec![q2]],
            vec![DenseMatrix::from_diagonal(&[a1]), DenseMatrix::from_diagonal(&[a2])],
            DenseMatrix::from_diagonal(&[p3]),
        )
        .unwrap();
        assert_eq!(g.entry(1, 0).unwrap(), p2 * a1);
        assert_eq!(g.entry(1, 1).unwrap(), p2 * q1);
        assert_eq!(g.entry(2, 1).unwrap(), p3 * a2 * q1);
        assert_eq!(g.entry(2, 2).unwrap(), p3 * q2);
        assert_eq!(g.entry(0, 0).unwrap(), p1);
        assert_eq!(g.entry(0, 1), Err(Error::OutsideCoveredRegion { i: 0, j: 1 }));
    }

    #[test]
    fn all_ones_generators() {
        let g = ones(4, 1);
        let b = g.reconstruct_structured();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(b[(i, j)], if j <= i { 1.0 } else { 0.0 });
                if j <= i {
                    assert_eq!(g.entry(i, j).unwrap(), 1.0);
                }
            }
        }
        let s = g.tail_stacks();
        assert_eq!(s.len(), 4);
        assert_eq!(s[3].as_slice(), &[1.0]);
        assert_eq!(s[2].as_slice(), &[1.0, 1.0]);
        assert_eq!(s[1].as_slice(), &[1.0, 1.0, 1.0]);
        assert_eq!(s[0].rows(), 4);
    }

    #[test]
    fn nilpotent_chain_truncation() {
        let (n, r) = (6, 2);
        let m = n - r;
        let p: Vec<Vec<f64>> = (0..m).map(|k| vec![k as f64 + 1.0, -(k as f64)]).collect();
        let q: Vec<Vec<f64>> = (0..m).map(|k| vec![0.5, k as f64]).collect();
        let g = GreenGenerators::new(
            n,
            r,
            p.clone(),
            q.clone(),
            vec![DenseMatrix::zeros(r, r); m],
            DenseMatrix::identity(r),
        )
        .unwrap();
        let b = g.reconstruct_structured();
        for i in 0..n {
            for j in 0..n {
                let expected = if i < m {
                    if i == 0 && j < r {
                        p[0][j]
                    } else if i >= 1 && j == i + r - 1 {
                        p[i][0] * q[i - 1][0] + p[i][1] * q[i - 1][1]
                    } else {
                        0.0
                    }
                } else if j == r + m - 1 {
                    // p_last = I picks q(m) componentwise
                    q[m - 1][i - m]
                } else {
                    0.0
                };
                assert_eq!(b[(i, j)], expected, "({i},{j})");
            }
        }
        let s = g.tail_stacks();
        for k in 0..m {
            assert_eq!(s[k].row(0), p[k].as_slice());
            assert!(s[k].as_slice()[r..].iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn identity_is_green_of_any_order() {
        let i8 = DenseMatrix::<f64>::identity(8);
        for r in 1..8 {
            assert!(check_green_rank(&i8, r, 1e-12));
            assert!(check_upper_green_rank(&i8, r, 1e-12));
        }
    }

    #[test]
    fn planted_rank_violation() {
        let n = 10;
        let r = 2;
        // A full-rank block sitting inside B(k:n, 1:k+r-1) for k = 4.
        let mut b = DenseMatrix::<f64>::zeros(n, n);
        for t in 0..r + 1 {
            b[(3 + t, t)] = 1.0;
        }
        assert!(!check_green_rank(&b, r, 1e-12));
        assert!(check_green_rank(&b, r + 1, 1e-12));
    }

    #[test]
    fn shape_validation() {
        let bad = GreenGenerators::new(
            4,
            2,
            vec![vec![1.0; 2]; 1],
            vec![vec![1.0; 2]; 2],
            vec![DenseMatrix::identity(2); 2],
            DenseMatrix::identity(2),
        );
        assert!(matches!(bad, Err(Error::Shape(_))));
        assert!(GreenGenerators::<f64>::new(2, 2, vec![], vec![], vec![], DenseMatrix::identity(2)).is_err());
    }
}
