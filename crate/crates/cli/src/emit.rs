use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use bloch_bohr::Error;
use serde::Serialize;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(io::Error),
    /// Check mode found values outside tolerance.
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Check(_) | CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                Error::Domain(_)
                | Error::Parameter(_)
                | Error::UnsupportedComparison(_)
                | Error::DegenerateBound(_) => 2,
                Error::NoRoot(_) | Error::NoUnivalenceRadius(_) => 3,
                Error::Truncation(_) => 4,
                Error::Quadrature { .. } | Error::Evaluation { .. } | Error::Consistency(_) => 5,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// Buffered writer onto `path`, or standard output.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// One JSON object per invocation; floats go out in shortest round-trip form.
pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Long-format CSV, LF line endings, fixed decimals.
pub fn write_csv(
    path: Option<&Path>,
    header: &[&str],
    rows: &[Vec<f64>],
    decimals: usize,
) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink(path)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:.decimals$}")))?;
    }
    w.flush()?;
    Ok(())
}
