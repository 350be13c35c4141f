//! Deterministic random test matrices.
//!
//! Every generator draws from xoshiro256++ seeded through SplitMix64
//! (`rand_xoshiro::Xoshiro256PlusPlus::seed_from_u64`). A uniform sample on
//! `[0, 1)` is `(next_u64() >> 11) * 2^-53`. Band entries are drawn row by
//! row, left to right, so the same `(n, bandwidths, seed)` always produces
//! the same matrix.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::matrix::oracle::{condition_number_2, unit_f64};
use crate::matrix::{BandedMatrix, DenseMatrix, UpperBandwidth};
use crate::scalar::Real;

/// Seeded stream of uniform `[0, 1)` samples.
#[derive(Debug, Clone)]
pub struct UniformStream {
    rng: Xoshiro256PlusPlus,
}

impl UniformStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        unit_f64(self.rng.next_u64())
    }
}

/// Band matrix with i.i.d. uniform `[0, 1)` entries inside the band and
/// `diag_shift` added to the diagonal.
pub fn random_band<T: Real>(
    n: usize,
    r_lower: usize,
    r_upper: UpperBandwidth,
    seed: u64,
    diag_shift: T,
) -> Result<BandedMatrix<T>> {
    let mut b = BandedMatrix::zeros(n, r_lower, r_upper)?;
    let mut rng = UniformStream::new(seed);
    for i in 0..n {
        let (lo, hi) = b.row_band(i);
        for j in lo..hi {
            let mut v = T::from_f64_lossy(rng.next_unit());
            if i == j {
                v += diag_shift;
            }
            b.set(i, j, v)?;
        }
    }
    Ok(b)
}

/// Lower band matrix of order `r` (full upper part) whose spectral condition
/// number lies within a factor of two of `target_cond`.
///
/// The base matrix has uniform entries in the lower band, uniform entries
/// scaled by `1/n` above the diagonal and `r + 2` added to the diagonal, so it
/// is strictly row diagonally dominant and well conditioned. Targets below
/// its condition number are reached by blending it with the identity;
/// larger targets by blending its last column toward a random combination of
/// the other columns, which keeps the band pattern (the last column is
/// unconstrained) and drives one singular value to zero. The blend parameter
/// is searched on a logarithmic scale with the dense oracle measuring the
/// condition number.
pub fn prescribed_condition_band<T: Real>(n: usize, r: usize, target_cond: f64, seed: u64) -> Result<BandedMatrix<T>> {
    if !(target_cond >= 1.0) || !target_cond.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "target condition number must be >= 1, got {target_cond}"
        )));
    }
    let base = diagonally_dominant_lower_band(n, r, seed)?;
    let kappa = |m: &DenseMatrix<f64>| -> f64 { condition_number_2(m).unwrap_or(f64::INFINITY) };
    let accept = |k: f64| k >= target_cond / 1.5 && k <= target_cond * 1.5;

    let base_kappa = kappa(&base);
    let mut best = (f64::INFINITY, DenseMatrix::identity(n));
    let mut note = |k: f64, m: &DenseMatrix<f64>| {
        if (k.ln() - target_cond.ln()).abs() < (best.0.ln() - target_cond.ln()).abs() {
            best = (k, m.clone());
        }
    };

    let result = if target_cond <= base_kappa {
        // (1 - s) I + s M for s in [0, 1]: condition 1 at s = 0.
        let blend = |s: f64| {
            DenseMatrix::from_fn(n, n, |i, j| {
                let id = if i == j { 1.0 } else { 0.0 };
                (1.0 - s) * id + s * base[(i, j)]
            })
        };
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut found = None;
        for it in 0..80 {
            let s = if it == 0 { 0.0 } else { 0.5 * (lo + hi) };
            let m = blend(s);
            let k = kappa(&m);
            note(k, &m);
            if accept(k) {
                found = Some(m);
                break;
            }
            if k < target_cond {
                lo = s;
            } else {
                hi = s;
            }
        }
        found
    } else {
        let mut rng = UniformStream::new(seed ^ 0x9e37_79b9_7f4a_7c15);
        let weights: Vec<f64> = (0..n - 1).map(|_| 2.0 * rng.next_unit() - 1.0).collect();
        let combo: Vec<f64> = (0..n)
            .map(|i| (0..n - 1).map(|j| base[(i, j)] * weights[j]).sum())
            .collect();
        let bordered = |s: f64| {
            let mut m = base.clone();
            for (i, &c) in combo.iter().enumerate() {
                m[(i, n - 1)] = s * base[(i, n - 1)] + (1.0 - s) * c;
            }
            m
        };
        // Condition grows roughly like 1/s; search ln s in [ln 1e-300, 0].
        let (mut lo, mut hi) = (-690.0_f64, 0.0_f64);
        let mut t = (base_kappa / target_cond).ln().clamp(lo, hi);
        let mut found = None;
        for _ in 0..80 {
            let m = bordered(t.exp());
            let k = kappa(&m);
            note(k, &m);
            if accept(k) {
                found = Some(m);
                break;
            }
            if k > target_cond {
                lo = t;
            } else {
                hi = t;
            }
            // Slope -1 step in log-log coordinates, kept inside the bracket.
            let step = t + (k.min(1e300).ln() - target_cond.ln());
            t = if step > lo && step < hi && k.is_finite() {
                step
            } else {
                0.5 * (lo + hi)
            };
        }
        found
    };

    match result {
        Some(m) => BandedMatrix::from_dense(&m.map(T::from_f64_lossy), r, UpperBandwidth::Full),
        None => Err(Error::ConditionTarget {
            target: target_cond,
            achieved: best.0,
        }),
    }
}

fn diagonally_dominant_lower_band(n: usize, r: usize, seed: u64) -> Result<DenseMatrix<f64>> {
    let band = random_band::<f64>(n, r, UpperBandwidth::Full, seed, 0.0)?;
    let shift = r as f64 + 2.0;
    let scale = 1.0 / n as f64;
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        let v = band.get(i, j);
        match j.cmp(&i) {
            std::cmp::Ordering::Greater => v * scale,
            std::cmp::Ordering::Equal => v + shift,
            std::cmp::Ordering::Less => v,
        }
    }))
}
