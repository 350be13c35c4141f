//! The file-level operations behind `gen`, `invert`, `reconstruct` and
//! `verify`. They take and return file contents so they can be driven
//! without a process boundary.

use std::fmt;

use greenband::green::io::{parse_generators_json, write_generators_json};
use greenband::matrix::io::{format_sig17, parse_matrix_text, write_matrix_text};
use greenband::{
    condition_number_2, covered_relative_error, dense_invert, invert_lower_band_lu, invert_lower_band_qr,
    invert_two_sided_lu, invert_two_sided_qr, prescribed_condition_band, random_band, BandedMatrix, GreenGenerators,
    UpperBandwidth,
};

use crate::error::{CliError, CliResult};

/// Structured inversion route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InvertMethod {
    Qr,
    Lu,
}

#[derive(Debug, Clone)]
pub struct GenSpec {
    pub n: usize,
    pub r: usize,
    pub r_upper: UpperBandwidth,
    pub seed: u64,
    pub diag_shift: f64,
    /// Prescribed 2-norm condition number; forces a full upper part.
    pub cond: Option<f64>,
}

pub fn generate(spec: &GenSpec) -> CliResult<BandedMatrix<f64>> {
    let a = match spec.cond {
        Some(c) => prescribed_condition_band(spec.n, spec.r, c, spec.seed),
        None => random_band(spec.n, spec.r, spec.r_upper, spec.seed, spec.diag_shift),
    };
    a.map_err(|e| CliError::from_lib("gen", e))
}

pub fn parse_matrix(text: &str, source: &str) -> CliResult<BandedMatrix<f64>> {
    parse_matrix_text(text).map_err(|e| CliError::from_lib(source, e))
}

pub fn parse_generators(text: &str, source: &str) -> CliResult<GreenGenerators<f64>> {
    parse_generators_json(text).map_err(|e| CliError::from_lib(source, e))
}

/// Two-sided routine when the upper bandwidth is limited, lower-band
/// routine otherwise.
pub fn invert(a: &BandedMatrix<f64>, method: InvertMethod) -> CliResult<GreenGenerators<f64>> {
    let g = match (method, a.is_two_sided()) {
        (InvertMethod::Qr, true) => invert_two_sided_qr(a),
        (InvertMethod::Qr, false) => invert_lower_band_qr(a),
        (InvertMethod::Lu, true) => invert_two_sided_lu(a),
        (InvertMethod::Lu, false) => invert_lower_band_lu(a),
    };
    let tag = match method {
        InvertMethod::Qr => "qr",
        InvertMethod::Lu => "lu",
    };
    g.map_err(|e| CliError::from_lib(tag, e))
}

pub fn invert_text(matrix: &str, method: InvertMethod) -> CliResult<String> {
    let a = parse_matrix(matrix, "matrix")?;
    Ok(write_generators_json(&invert(&a, method)?))
}

/// Covered part of the generated matrix, written in the matrix text format
/// with lower bandwidth `n - 1` and upper bandwidth `r - 1`.
pub fn reconstruct_text(generators: &str) -> CliResult<String> {
    let g = parse_generators(generators, "generators")?;
    let n = g.n();
    let b = BandedMatrix::from_dense(
        &g.reconstruct_structured(),
        n - 1,
        UpperBandwidth::Limited((g.r() - 1).min(n - 1)),
    )
    .map_err(|e| CliError::from_lib("reconstruct", e))?;
    Ok(write_matrix_text(&b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub rel_err: f64,
    pub kappa: f64,
    pub threshold: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.rel_err <= self.threshold
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rel_err {}", format_sig17(self.rel_err))?;
        writeln!(f, "kappa2 {}", format_sig17(self.kappa))?;
        writeln!(f, "threshold {}", format_sig17(self.threshold))?;
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Covered-part error of `g` against the dense inverse of `a`, with the
/// threshold `100 eps kappa_2(a)`.
pub fn verify(a: &BandedMatrix<f64>, g: &GreenGenerators<f64>) -> CliResult<VerifyReport> {
    if a.n() != g.n() {
        return Err(CliError::Parse(format!(
            "matrix has order {} but generators have order {}",
            a.n(),
            g.n()
        )));
    }
    let d = a.to_dense();
    let inv = dense_invert(&d).map_err(|e| CliError::from_lib("oracle", e))?;
    let kappa = condition_number_2(&d).map_err(|e| CliError::from_lib("oracle", e))?;
    Ok(VerifyReport {
        rel_err: covered_relative_error(g, &inv),
        kappa,
        threshold: 100.0 * f64::EPSILON * kappa,
    })
}

pub fn verify_text(matrix: &str, generators: &str) -> CliResult<VerifyReport> {
    let a = parse_matrix(matrix, "matrix")?;
    let g = parse_generators(generators, "generators")?;
    verify(&a, &g)
}
