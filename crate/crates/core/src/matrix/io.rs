//! Plain-text matrix format.
//!
//! ```text
//! N r_lower r_upper
//! a11,a12,...,a1N
//! ...
//! aN1,aN2,...,aNN
//! ```
//!
//! `r_upper` is a count or the word `full`. Values are written with 17
//! significant digits; the reader checks that every entry outside the
//! declared band is zero.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::{BandedMatrix, DenseMatrix, UpperBandwidth};
use crate::scalar::Real;

/// Formats a value with 17 significant digits.
pub fn format_sig17<T: Real>(x: T) -> String {
    format!("{:.16e}", x.to_f64_lossy())
}

pub fn write_matrix_text<T: Real>(b: &BandedMatrix<T>) -> String {
    let n = b.n();
    let mut out = String::with_capacity(n * n * 24 + 32);
    let _ = writeln!(out, "{} {} {}", n, b.r_lower(), b.r_upper());
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format_sig17(b.get(i, j)));
        }
        out.push('\n');
    }
    out
}

pub fn parse_matrix_text<T: Real>(text: &str) -> Result<BandedMatrix<T>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let perr = |line: usize, message: String| Error::Parse {
        line: line + 1,
        message,
    };
    if fields.len() != 3 {
        return Err(perr(hline, format!("expected `N r_lower r_upper`, got `{header}`")));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|e| perr(hline, format!("matrix order: {e}")))?;
    let r_lower: usize = fields[1]
        .parse()
        .map_err(|e| perr(hline, format!("lower bandwidth: {e}")))?;
    let r_upper: UpperBandwidth = fields[2].parse().map_err(|e: Error| perr(hline, e.to_string()))?;

    let mut data = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (lno, line) in lines {
        if rows == n {
            return Err(perr(lno, "more rows than the declared order".into()));
        }
        let before = data.len();
        for tok in line.split(',') {
            let v: f64 = tok
                .trim()
                .parse()
                .map_err(|e| perr(lno, format!("value `{}`: {e}", tok.trim())))?;
            data.push(T::from_f64_lossy(v));
        }
        if data.len() - before != n {
            return Err(perr(lno, format!("expected {n} values, got {}", data.len() - before)));
        }
        rows += 1;
    }
    if rows != n {
        return Err(perr(hline, format!("expected {n} rows, got {rows}")));
    }
    let dense = DenseMatrix::from_row_major(n, n, data)?;
    BandedMatrix::from_dense(&dense, r_lower, r_upper)
}
