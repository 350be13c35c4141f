//! JSON interchange format for generators.
//!
//! ```json
//! {"n":5,"r":2,"p":[[..],..],"q":[[..],..],"a":[[..],..],"p_last":[..]}
//! ```
//!
//! `p` holds the `n - r` rows, `q` the `n - r` columns, `a` the `n - r`
//! transition blocks flattened row-major and `p_last` the closing `r x r`
//! block, also row-major. Numbers are written with 17 significant digits.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::green::GreenGenerators;
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    n: usize,
    r: usize,
    p: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
    a: Vec<Vec<f64>>,
    p_last: Vec<f64>,
}

/// Compact JSON with every float printed as `{:.16e}`.
struct Sig17Formatter;

impl Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn write_generators_json<T: Real>(g: &GreenGenerators<T>) -> String {
    let f = |xs: &[T]| xs.iter().map(|x| x.to_f64_lossy()).collect::<Vec<_>>();
    let file = GeneratorFile {
        n: g.n(),
        r: g.r(),
        p: g.p().iter().map(|row| f(row)).collect(),
        q: g.q().iter().map(|col| f(col)).collect(),
        a: g.a().iter().map(|b| f(b.as_slice())).collect(),
        p_last: f(g.p_last().as_slice()),
    };
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter);
    file.serialize(&mut ser)
        .expect("serializing finite generators cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn parse_generators_json<T: Real>(text: &str) -> Result<GreenGenerators<T>> {
    let file: GeneratorFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let conv = |xs: Vec<f64>| xs.into_iter().map(T::from_f64_lossy).collect::<Vec<T>>();
    let r = file.r;
    let block = |xs: Vec<f64>, what: &str| {
        DenseMatrix::from_row_major(r, r, conv(xs))
            .map_err(|_| Error::Shape(format!("{what} must hold {r}x{r} finite values")))
    };
    let a = file
        .a
        .into_iter()
        .map(|b| block(b, "a block"))
        .collect::<Result<Vec<_>>>()?;
    let p_last = block(file.p_last, "p_last")?;
    GreenGenerators::new(
        file.n,
        r,
        file.p.into_iter().map(conv).collect(),
        file.q.into_iter().map(conv).collect(),
        a,
        p_last,
    )
}
