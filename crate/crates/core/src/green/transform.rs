//! Products of elementary transforms `I_{k-1} (+) G_k (+) I_{n-k-r}`.

use crate::error::{Error, Result};
use crate::green::GreenGenerators;
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

/// Order in which the embedded factors are multiplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductOrder {
    /// `G = G~_{m+1} G~_m ... G~_1`: factor 1 acts first.
    Descending,
    /// `W = W~_1 W~_2 ... W~_{m+1}`: factor 1 is leftmost.
    Ascending,
}

/// Where the `r x r` closing block is embedded and when it acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosingBlock {
    /// `I_{n-r} (+) C`, the `(m + 1)`-th factor of the sequence.
    Trailing,
    /// `C (+) I_{n-r}`, placed before factor 1 in the sequence (so for a
    /// descending product it acts first: `G = G~_m ... G~_1 (C (+) I)`).
    Leading,
}

/// An ordered product of `m = n - r` embedded `(r+1) x (r+1)` factors and
/// one `r x r` closing block.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformProduct<T> {
    n: usize,
    r: usize,
    factors: Vec<DenseMatrix<T>>,
    closing: DenseMatrix<T>,
    order: ProductOrder,
    placement: ClosingBlock,
}

impl<T: Real> TransformProduct<T> {
    pub fn new(
        n: usize,
        r: usize,
        factors: Vec<DenseMatrix<T>>,
        closing: DenseMatrix<T>,
        order: ProductOrder,
        placement: ClosingBlock,
    ) -> Result<Self> {
        if r == 0 || n <= r {
            return Err(Error::InvalidBandwidth {
                n,
                r_lower: r,
                r_upper: 0,
            });
        }
        if factors.len() != n - r || factors.iter().any(|f| f.rows() != r + 1 || f.cols() != r + 1) {
            return Err(Error::Shape(format!(
                "expected {} factors of size {}x{}",
                n - r,
                r + 1,
                r + 1
            )));
        }
        if closing.rows() != r || closing.cols() != r {
            return Err(Error::Shape(format!("closing block must be {r}x{r}")));
        }
        Ok(Self {
            n,
            r,
            factors,
            closing,
            order,
            placement,
        })
    }

    /// Descending product with a trailing closing block, the layout used by
    /// the factorization transforms.
    pub fn descending(n: usize, r: usize, factors: Vec<DenseMatrix<T>>, closing: DenseMatrix<T>) -> Result<Self> {
        Self::new(n, r, factors, closing, ProductOrder::Descending, ClosingBlock::Trailing)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn factors(&self) -> &[DenseMatrix<T>] {
        &self.factors
    }

    pub fn closing(&self) -> &DenseMatrix<T> {
        &self.closing
    }

    pub fn order(&self) -> ProductOrder {
        self.order
    }

    pub fn placement(&self) -> ClosingBlock {
        self.placement
    }

    /// Dense `n x n` product.
    pub fn expand(&self) -> DenseMatrix<T> {
        let (n, r) = (self.n, self.r);
        let m = n - r;
        // Sequence of (row offset, block) from leftmost to rightmost factor.
        let mut seq: Vec<(usize, &DenseMatrix<T>)> = Vec::with_capacity(m + 1);
        let closing_offset = match self.placement {
            ClosingBlock::Trailing => m,
            ClosingBlock::Leading => 0,
        };
        match self.order {
            ProductOrder::Descending => {
                if self.placement == ClosingBlock::Trailing {
                    seq.push((closing_offset, &self.closing));
                }
                seq.extend(self.factors.iter().enumerate().rev());
                if self.placement == ClosingBlock::Leading {
                    seq.push((closing_offset, &self.closing));
                }
            }
            ProductOrder::Ascending => {
                if self.placement == ClosingBlock::Leading {
                    seq.push((closing_offset, &self.closing));
                }
                seq.extend(self.factors.iter().enumerate());
                if self.placement == ClosingBlock::Trailing {
                    seq.push((closing_offset, &self.closing));
                }
            }
        }
        // Apply right to left onto the identity.
        let mut out = DenseMatrix::identity(n);
        for &(off, block) in seq.iter().rev() {
            apply_embedded_left(block, off, &mut out);
        }
        out
    }
}

/// `m <- (I (+) block (+) I) m` with the block starting at row `off`.
fn apply_embedded_left<T: Real>(block: &DenseMatrix<T>, off: usize, m: &mut DenseMatrix<T>) {
    let rows = m.submatrix(off, 0, block.rows(), m.cols());
    let updated = block.matmul(&rows);
    m.set_submatrix(off, 0, &updated);
}

/// Lower Green generators and the superdiagonal entries `G(k, k + r)` of a
/// descending product, read off the partitions
/// `G_k = [p_G(k) d_G(k); a_G(k) q_G(k)]` and `p_G(m + 1) = G_{m+1}`.
pub fn generators_from_transforms<T: Real>(t: &TransformProduct<T>) -> Result<(GreenGenerators<T>, Vec<T>)> {
    if t.order != ProductOrder::Descending || t.placement != ClosingBlock::Trailing {
        return Err(Error::WrongOrder);
    }
    let r = t.r;
    let m = t.factors.len();
    let mut p = Vec::with_capacity(m);
    let mut q = Vec::with_capacity(m);
    let mut a = Vec::with_capacity(m);
    let mut d = Vec::with_capacity(m);
    for g in &t.factors {
        p.push(g.row(0)[..r].to_vec());
        d.push(g[(0, r)]);
        a.push(g.submatrix(1, 0, r, r));
        q.push(g.submatrix(1, r, r, 1).column(0));
    }
    let gens = GreenGenerators::new(t.n, r, p, q, a, t.closing.clone())?;
    Ok((gens, d))
}

/// Inverse of [`generators_from_transforms`]: assembles
/// `G_k = [p(k) d(k); a(k) q(k)]` and `G_{m+1} = p_last`.
pub fn transforms_from_generators<T: Real>(g: &GreenGenerators<T>, d: &[T]) -> Result<TransformProduct<T>> {
    let (n, r) = (g.n(), g.r());
    if d.len() != n - r {
        return Err(Error::Shape(format!(
            "expected {} superdiagonal entries, got {}",
            n - r,
            d.len()
        )));
    }
    let factors = (0..n - r)
        .map(|k| {
            let mut f = DenseMatrix::zeros(r + 1, r + 1);
            f.row_mut(0)[..r].copy_from_slice(&g.p()[k]);
            f[(0, r)] = d[k];
            f.set_submatrix(1, 0, &g.a()[k]);
            for (i, &v) in g.q()[k].iter().enumerate() {
                f[(i + 1, r)] = v;
            }
            f
        })
        .collect();
    TransformProduct::descending(n, r, factors, g.p_last().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot(theta: f64) -> DenseMatrix<f64> {
        let (s, c) = theta.sin_cos();
        DenseMatrix::from_rows(&[vec![c, -s], vec![s, c]]).unwrap()
    }

    #[test]
    fn identity_factors_expand_to_identity() {
        let t = TransformProduct::<f64>::descending(5, 2, vec![DenseMatrix::identity(3); 3], DenseMatrix::identity(2))
            .unwrap();
        assert_eq!(t.expand(), DenseMatrix::identity(5));
    }

    #[test]
    fn hand_multiplied_three_by_three() {
        let (g1, g2) = (rot(0.3), rot(-1.1));
        let last = DenseMatrix::from_diagonal(&[2.0]);
        let t = TransformProduct::descending(3, 1, vec![g1.clone(), g2.clone()], last).unwrap();
        let e1 = DenseMatrix::from_rows(&[
            vec![g1[(0, 0)], g1[(0, 1)], 0.0],
            vec![g1[(1, 0)], g1[(1, 1)], 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let e2 = DenseMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, g2[(0, 0)], g2[(0, 1)]],
            vec![0.0, g2[(1, 0)], g2[(1, 1)]],
        ])
        .unwrap();
        let e3 = DenseMatrix::from_diagonal(&[1.0, 1.0, 2.0]);
        let expected = e3.matmul(&e2).matmul(&e1);
        assert!(t.expand().sub(&expected).max_abs() < 1e-15);
    }

    #[test]
    fn identity_partition() {
        let t = TransformProduct::<f64>::descending(4, 2, vec![DenseMatrix::identity(3); 2], DenseMatrix::identity(2))
            .unwrap();
        let (g, d) = generators_from_transforms(&t).unwrap();
        assert_eq!(d, vec![0.0, 0.0]);
        assert_eq!(g.p()[0], vec![1.0, 0.0]);
        assert_eq!(
            g.a()[0],
            DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()
        );
        assert_eq!(g.q()[0], vec![0.0, 1.0]);
        assert_eq!(g.reconstruct_structured(), DenseMatrix::identity(4).tril(1));
    }

    #[test]
    fn single_block_round_trip() {
        let g1 = DenseMatrix::from_rows(&[vec![1.5, -2.0], vec![0.25, 3.0]]).unwrap();
        let t = TransformProduct::descending(2, 1, vec![g1.clone()], DenseMatrix::from_diagonal(&[0.5])).unwrap();
        let (g, d) = generators_from_transforms(&t).unwrap();
        assert_eq!(d, vec![-2.0]);
        assert_eq!(g.p()[0], vec![1.5]);
        assert_eq!(g.a()[0][(0, 0)], 0.25);
        assert_eq!(g.q()[0], vec![3.0]);
        let back = transforms_from_generators(&g, &d).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn zero_generators_with_unit_superdiagonal() {
        let (n, r) = (5, 2);
        let g = GreenGenerators::new(
            n,
            r,
            vec![vec![0.0; r]; n - r],
            vec![vec![0.0; r]; n - r],
            vec![DenseMatrix::zeros(r, r); n - r],
            DenseMatrix::zeros(r, r),
        )
        .unwrap();
        let t = transforms_from_generators(&g, &[1.0; 3]).unwrap();
        let dense = t.expand();
        // Dense oracle: multiply the embedded blocks by hand.
        let mut expected = DenseMatrix::identity(n);
        let mut last = DenseMatrix::identity(n);
        for i in n - r..n {
            last[(i, i)] = 0.0;
        }
        expected = last.matmul(&expected);
        let mut acc = DenseMatrix::identity(n);
        for k in 0..n - r {
            let mut e = DenseMatrix::identity(n);
            e.set_submatrix(k, k, &t.factors()[k]);
            acc = e.matmul(&acc);
        }
        expected = expected.matmul(&acc);
        assert_eq!(dense, expected);
        // only d_G survives, and only if no later factor wipes it
        assert_eq!(dense[(0, r)], 1.0);
    }

    #[test]
    fn wrong_order_is_rejected() {
        let t = TransformProduct::<f64>::new(
            4,
            2,
            vec![DenseMatrix::identity(3); 2],
            DenseMatrix::identity(2),
            ProductOrder::Ascending,
            ClosingBlock::Trailing,
        )
        .unwrap();
        assert_eq!(generators_from_transforms(&t).unwrap_err(), Error::WrongOrder);
        assert!(transforms_from_generators(
            &generators_from_transforms(
                &TransformProduct::<f64>::descending(4, 2, vec![DenseMatrix::identity(3); 2], DenseMatrix::identity(2))
                    .unwrap()
            )
            .unwrap()
            .0,
            &[0.0]
        )
        .is_err());
    }

    #[test]
    fn ascending_and_leading_layouts() {
        let (g1, g2) = (rot(0.4), rot(0.9));
        let c = DenseMatrix::from_diagonal(&[3.0]);
        let embed = |b: &DenseMatrix<f64>, off: usize| {
            let mut e = DenseMatrix::identity(3);
            e.set_submatrix(off, off, b);
            e
        };
        let asc = TransformProduct::new(
            3,
            1,
            vec![g1.clone(), g2.clone()],
            c.clone(),
            ProductOrder::Ascending,
            ClosingBlock::Trailing,
        )
        .unwrap();
        let expected = embed(&g1, 0).matmul(&embed(&g2, 1)).matmul(&embed(&c, 2));
        assert!(asc.expand().sub(&expected).max_abs() < 1e-15);
        let lead = TransformProduct::new(
            3,
            1,
            vec![g1.clone(), g2.clone()],
            c.clone(),
            ProductOrder::Descending,
            ClosingBlock::Leading,
        )
        .unwrap();
        let expected = embed(&g2, 1).matmul(&embed(&g1, 0)).matmul(&embed(&c, 0));
        assert!(lead.expand().sub(&expected).max_abs() < 1e-15);
    }
}
