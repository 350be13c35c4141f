//! Command-line front end for `greenband`: matrix generation, inversion to
//! generator files, reconstruction, verification against the dense oracle,
//! timing sweeps with log-log slope fits and scripted experiments.
//!
//! Files: matrices use the text format of [`greenband::matrix::io`],
//! generators the JSON format of [`greenband::green::io`], benchmarks a CSV
//! with header `n,method,seconds,rel_err`. Numbers are written with 17
//! significant digits.

pub mod bench;
pub mod cli;
pub mod commands;
pub mod error;
pub mod examples;
pub mod fit;

pub use bench::{BenchConfig, BenchRecord, Method};
pub use cli::run;
pub use error::{exit, CliError};
pub use fit::{slope_fit, SlopeFit};
