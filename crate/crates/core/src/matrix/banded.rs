use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

/// Upper bandwidth of a [`BandedMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpperBandwidth {
    /// `A(i, j) = 0` whenever `j - i` exceeds the count.
    Limited(usize),
    /// No constraint above the diagonal (bandwidth `n - 1`).
    Full,
}

impl UpperBandwidth {
    /// The bandwidth as a count for a matrix of order `n`.
    pub fn resolve(self, n: usize) -> usize {
        match self {
            UpperBandwidth::Limited(u) => u.min(n.saturating_sub(1)),
            UpperBandwidth::Full => n.saturating_sub(1),
        }
    }
}

impl fmt::Display for UpperBandwidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperBandwidth::Limited(u) => write!(f, "{u}"),
            UpperBandwidth::Full => f.write_str("full"),
        }
    }
}

impl std::str::FromStr for UpperBandwidth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "full" | "Full" | "FULL" => Ok(UpperBandwidth::Full),
            t => t
                .parse::<usize>()
                .map(UpperBandwidth::Limited)
                .map_err(|e| Error::InvalidArgument(format!("upper bandwidth `{t}`: {e}"))),
        }
    }
}

/// An `n x n` matrix with `A(i, j) = 0` for `i - j > r_lower` and for
/// `j - i > r_upper`.
///
/// Entries are stored by diagonals in the LAPACK general-band layout: the
/// buffer has `r_lower + ku + 1` rows of length `n` and `A(i, j)` lives at
/// row `ku + i - j`, column `j`, where `ku` is the resolved upper bandwidth.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix<T> {
    n: usize,
    r_lower: usize,
    r_upper: UpperBandwidth,
    ku: usize,
    bands: Vec<T>,
}

impl<T: Real> BandedMatrix<T> {
    /// The zero matrix with the given band pattern. Requires `n > r_lower > 0`.
    pub fn zeros(n: usize, r_lower: usize, r_upper: UpperBandwidth) -> Result<Self> {
        if r_lower == 0 || r_lower >= n {
            return Err(Error::InvalidBandwidth {
                n,
                r_lower,
                r_upper: r_upper.resolve(n),
            });
        }
        if let UpperBandwidth::Limited(u) = r_upper {
            if u >= n {
                return Err(Error::InvalidBandwidth { n, r_lower, r_upper: u });
            }
        }
        let ku = r_upper.resolve(n);
        Ok(Self {
            n,
            r_lower,
            r_upper,
            ku,
            bands: vec![T::zero(); (r_lower + ku + 1) * n],
        })
    }

    /// Compresses a dense matrix, rejecting nonzero entries outside the band.
    pub fn from_dense(m: &DenseMatrix<T>, r_lower: usize, r_upper: UpperBandwidth) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape(format!(
                "banded matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let mut b = Self::zeros(m.rows(), r_lower, r_upper)?;
        for i in 0..b.n {
            for j in 0..b.n {
                let v = m[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
                if b.in_band(i, j) {
                    let o = b.offset(i, j);
                    b.bands[o] = v;
                } else if v != T::zero() {
                    return Err(Error::OutsideBand { i, j });
                }
            }
        }
        Ok(b)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r_lower(&self) -> usize {
        self.r_lower
    }

    #[inline]
    pub fn r_upper(&self) -> UpperBandwidth {
        self.r_upper
    }

    /// Resolved upper bandwidth as a count.
    #[inline]
    pub fn upper_count(&self) -> usize {
        self.ku
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i <= j + self.r_lower && j <= i + self.ku
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        (self.ku + i - j) * self.n + j
    }

    /// Entry `(i, j)`; zero outside the band or outside the matrix.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        if self.in_band(i, j) {
            self.bands[self.offset(i, j)]
        } else {
            T::zero()
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) -> Result<()> {
        if !self.in_band(i, j) {
            return Err(Error::OutsideBand { i, j });
        }
        if !value.is_finite() {
            return Err(Error::NonFinite { i, j });
        }
        let o = self.offset(i, j);
        self.bands[o] = value;
        Ok(())
    }

    /// Columns `lo..hi` of the band in row `i`.
    #[inline]
    pub fn row_band(&self, i: usize) -> (usize, usize) {
        (i.saturating_sub(self.r_lower), (i + self.ku + 1).min(self.n))
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut d = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let (lo, hi) = self.row_band(i);
            for j in lo..hi {
                d[(i, j)] = self.bands[self.offset(i, j)];
            }
        }
        d
    }

    pub fn norm_inf(&self) -> T {
        (0..self.n)
            .map(|i| {
                let (lo, hi) = self.row_band(i);
                (lo..hi).fold(T::zero(), |acc, j| acc + self.get(i, j).abs())
            })
            .fold(T::zero(), T::max)
    }

    /// `true` when the upper bandwidth is a limited count.
    pub fn is_two_sided(&self) -> bool {
        matches!(self.r_upper, UpperBandwidth::Limited(_))
    }

    /// Same entries, different declared upper bandwidth.
    pub fn with_upper(&self, r_upper: UpperBandwidth) -> Result<Self> {
        let mut b = Self::zeros(self.n, self.r_lower, r_upper)?;
        for i in 0..self.n {
            let (lo, hi) = self.row_band(i);
            for j in lo..hi {
                let v = self.get(i, j);
                if b.in_band(i, j) {
                    let o = b.offset(i, j);
                    b.bands[o] = v;
                } else if v != T::zero() {
                    return Err(Error::OutsideBand { i, j });
                }
            }
        }
        Ok(b)
    }

    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> BandedMatrix<U> {
        BandedMatrix {
            n: self.n,
            r_lower: self.r_lower,
            r_upper: self.r_upper,
            ku: self.ku,
            bands: self.bands.iter().map(|&x| f(x)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_from_full_upper_band() {
        let mut b = BandedMatrix::<f64>::zeros(2, 1, UpperBandwidth::Full).unwrap();
        b.set(0, 0, 1.0).unwrap();
        b.set(1, 1, 1.0).unwrap();
        assert_eq!(b.to_dense(), DenseMatrix::identity(2));
    }

    #[test]
    fn tridiagonal_placement() {
        let mut b = BandedMatrix::<f64>::zeros(3, 1, UpperBandwidth::Limited(1)).unwrap();
        for i in 0..3 {
            b.set(i, i, 2.0).unwrap();
            if i + 1 < 3 {
                b.set(i + 1, i, -1.0).unwrap();
                b.set(i, i + 1, -1.0).unwrap();
            }
        }
        let d = b.to_dense();
        let expected =
            DenseMatrix::from_rows(&[vec![2.0, -1.0, 0.0], vec![-1.0, 2.0, -1.0], vec![0.0, -1.0, 2.0]]).unwrap();
        assert_eq!(d, expected);
        assert_eq!(b.norm_inf(), 4.0);
    }

    #[test]
    fn rejects_out_of_band_writes_and_bad_widths() {
        let mut b = BandedMatrix::<f64>::zeros(4, 1, UpperBandwidth::Limited(1)).unwrap();
        assert_eq!(b.set(3, 0, 1.0), Err(Error::OutsideBand { i: 3, j: 0 }));
        assert_eq!(b.set(0, 2, 1.0), Err(Error::OutsideBand { i: 0, j: 2 }));
        assert!(BandedMatrix::<f64>::zeros(4, 0, UpperBandwidth::Full).is_err());
        assert!(BandedMatrix::<f64>::zeros(4, 4, UpperBandwidth::Full).is_err());
        assert!(BandedMatrix::<f64>::zeros(4, 1, UpperBandwidth::Limited(4)).is_err());
    }

    #[test]
    fn from_dense_validates_pattern() {
        let mut d = DenseMatrix::<f64>::identity(4);
        d[(3, 0)] = 1.0;
        assert_eq!(
            BandedMatrix::from_dense(&d, 2, UpperBandwidth::Full),
            Err(Error::OutsideBand { i: 3, j: 0 })
        );
        assert!(BandedMatrix::from_dense(&d, 3, UpperBandwidth::Limited(0)).is_ok());
    }

    #[test]
    fn upper_bandwidth_parses() {
        assert_eq!("full".parse::<UpperBandwidth>().unwrap(), UpperBandwidth::Full);
        assert_eq!("3".parse::<UpperBandwidth>().unwrap(), UpperBandwidth::Limited(3));
        assert!("x".parse::<UpperBandwidth>().is_err());
    }
}
