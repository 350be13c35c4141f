//! Timing sweeps.
//!
//! Each trial repeats the inversion until at least [`MIN_TRIAL_SECONDS`] have
//! elapsed and records the mean time per run; a record holds the median over
//! trials. Matrix generation and the oracle error are outside the timed
//! region.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use clap::ValueEnum;
use greenband::matrix::io::format_sig17;
use greenband::{
    covered_relative_error, dense_invert, dense_qr_invert, invert_lower_band_lu, invert_lower_band_qr,
    invert_two_sided_lu, invert_two_sided_qr, random_band, relative_error, BandedMatrix, UpperBandwidth,
};

use crate::error::{CliError, CliResult};
use crate::fit::{slope_fit, SlopeFit};

pub const MIN_TRIAL_SECONDS: f64 = 0.02;

/// Inversion route being timed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Method {
    /// Structured QR on a two-sided band matrix.
    Qr,
    /// Structured LU on a two-sided band matrix.
    Lu,
    /// Structured QR on a lower band matrix with full upper part.
    QrLower,
    /// Structured LU on a lower band matrix with full upper part.
    LuLower,
    /// Dense Gauss-Jordan inverse with partial pivoting.
    Dense,
    /// Dense Householder QR inverse.
    DenseQr,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Qr => "qr",
            Method::Lu => "lu",
            Method::QrLower => "qr-lower",
            Method::LuLower => "lu-lower",
            Method::Dense => "dense",
            Method::DenseQr => "dense-qr",
        }
    }

    /// Whether the benchmark matrix has a full upper part.
    pub fn lower_only(self) -> bool {
        matches!(self, Method::QrLower | Method::LuLower)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub method: Method,
    pub seconds: f64,
    /// Covered-part relative error against the dense oracle; `None` above
    /// the oracle cutoff.
    pub rel_err: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub r: usize,
    pub method: Method,
    pub trials: usize,
    pub seed: u64,
    pub oracle_cutoff: usize,
    /// Added to the diagonal; defaults to `r`.
    pub diag_shift: Option<f64>,
    /// Dense methods run on a lower band matrix with full upper part.
    pub dense_lower: bool,
}

impl BenchConfig {
    pub fn new(sizes: Vec<usize>, r: usize, method: Method) -> Self {
        BenchConfig {
            sizes,
            r,
            method,
            trials: 3,
            seed: 0,
            oracle_cutoff: 1000,
            diag_shift: None,
            dense_lower: false,
        }
    }
}

/// Uniform band matrix used by the benchmarks: lower bandwidth `r`, upper
/// bandwidth `r` or full, `diag_shift` on the diagonal.
pub fn bench_matrix(n: usize, r: usize, lower_only: bool, seed: u64, diag_shift: f64) -> CliResult<BandedMatrix<f64>> {
    let upper = if lower_only {
        UpperBandwidth::Full
    } else {
        UpperBandwidth::Limited(r)
    };
    random_band(n, r, upper, seed, diag_shift).map_err(|e| CliError::from_lib("matrix generation", e))
}

/// Runs `f` repeatedly and returns the median over `trials` of the mean
/// seconds per call.
pub fn median_seconds<R>(trials: usize, mut f: impl FnMut() -> R) -> f64 {
    let mut samples: Vec<f64> = (0..trials.max(1))
        .map(|_| {
            let start = Instant::now();
            let mut runs = 0u32;
            loop {
                black_box(f());
                runs += 1;
                let el = start.elapsed().as_secs_f64();
                if el >= MIN_TRIAL_SECONDS {
                    break el / runs as f64;
                }
            }
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    let m = samples.len();
    if m % 2 == 1 {
        samples[m / 2]
    } else {
        0.5 * (samples[m / 2 - 1] + samples[m / 2])
    }
}

/// Times one method on one matrix and, when `with_error`, measures the
/// covered-part error against the dense oracle.
///
/// The reference for the structured methods and `dense-qr` is the
/// Gauss-Jordan inverse; the reference for `dense` is the QR inverse.
pub fn bench_cell(a: &BandedMatrix<f64>, method: Method, trials: usize, with_error: bool) -> CliResult<BenchRecord> {
    let n = a.n();
    let r = a.r_lower();
    let lib = |e| CliError::from_lib(method.tag(), e);
    let structured = |a: &BandedMatrix<f64>| match method {
        Method::Qr => invert_two_sided_qr(a),
        Method::Lu => invert_two_sided_lu(a),
        Method::QrLower => invert_lower_band_qr(a),
        Method::LuLower => invert_lower_band_lu(a),
        Method::Dense | Method::DenseQr => unreachable!(),
    };
    let (seconds, rel_err) = match method {
        Method::Dense | Method::DenseQr => {
            let d = a.to_dense();
            let run = |m| {
                if method == Method::Dense {
                    dense_invert(m)
                } else {
                    dense_qr_invert(m)
                }
            };
            let inv = run(&d).map_err(lib)?;
            let seconds = median_seconds(trials, || run(&d));
            let err = if with_error {
                let reference = if method == Method::Dense {
                    dense_qr_invert(&d)
                } else {
                    dense_invert(&d)
                }
                .map_err(lib)?;
                let k = r as isize - 1;
                Some(relative_error(&inv.tril(k), &reference.tril(k)))
            } else {
                None
            };
            (seconds, err)
        }
        _ => {
            let g = structured(a).map_err(lib)?;
            let seconds = median_seconds(trials, || structured(a));
            let err = if with_error {
                let reference = dense_invert(&a.to_dense()).map_err(lib)?;
                Some(covered_relative_error(&g, &reference))
            } else {
                None
            };
            (seconds, err)
        }
    };
    Ok(BenchRecord {
        n,
        method,
        seconds,
        rel_err,
    })
}

pub fn run_bench(cfg: &BenchConfig) -> CliResult<Vec<BenchRecord>> {
    if cfg.sizes.len() < 3 {
        return Err(CliError::Parse(format!(
            "bench needs at least 3 sizes, got {}",
            cfg.sizes.len()
        )));
    }
    if cfg.trials == 0 {
        return Err(CliError::Parse("trials must be at least 1".into()));
    }
    let shift = cfg.diag_shift.unwrap_or(cfg.r as f64);
    let lower_only =
        cfg.method.lower_only() || (cfg.dense_lower && matches!(cfg.method, Method::Dense | Method::DenseQr));
    let mut out = Vec::with_capacity(cfg.sizes.len());
    for &n in &cfg.sizes {
        let a = bench_matrix(n, cfg.r, lower_only, cfg.seed, shift)?;
        out.push(bench_cell(&a, cfg.method, cfg.trials, n <= cfg.oracle_cutoff)?);
    }
    sort_records(&mut out);
    Ok(out)
}

pub fn sort_records(records: &mut [BenchRecord]) {
    records.sort_by_key(|r| (r.n, r.method));
}

/// Log-log slope of the records of one method.
pub fn fit_records(records: &[BenchRecord], method: Method) -> CliResult<SlopeFit> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.method == method)
        .map(|r| (r.n as f64, r.seconds))
        .collect();
    slope_fit(&pts)
}

/// CSV with header `n,method,seconds,rel_err`; an absent error is an empty
/// field.
pub fn write_bench_csv(records: &[BenchRecord]) -> String {
    let mut s = String::from("n,method,seconds,rel_err\n");
    for r in records {
        let err = r.rel_err.map(format_sig17).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{}", r.n, r.method.tag(), format_sig17(r.seconds), err);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let recs = vec![
            BenchRecord {
                n: 10,
                method: Method::QrLower,
                seconds: 0.5,
                rel_err: None,
            },
            BenchRecord {
                n: 4,
                method: Method::Dense,
                seconds: 1.25e-3,
                rel_err: Some(0.0),
            },
        ];
        let text = write_bench_csv(&recs);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "n,method,seconds,rel_err");
        assert_eq!(lines[1], "10,qr-lower,5.0000000000000000e-1,");
        assert_eq!(lines[2], "4,dense,1.2500000000000000e-3,0.0000000000000000e0");
    }

    #[test]
    fn small_sweep_has_errors_below_cutoff() {
        let mut cfg = BenchConfig::new(vec![30, 20, 40], 2, Method::Lu);
        cfg.trials = 1;
        cfg.oracle_cutoff = 30;
        let recs = run_bench(&cfg).unwrap();
        assert_eq!(recs.iter().map(|r| r.n).collect::<Vec<_>>(), vec![20, 30, 40]);
        assert!(recs[..2].iter().all(|r| r.rel_err.unwrap() < 1e-12));
        assert!(recs[2].rel_err.is_none());
        assert!(recs.iter().all(|r| r.seconds > 0.0));
    }
}
