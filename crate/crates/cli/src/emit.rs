use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use leapfrog_core::Error;

/// Error reported on stderr as `{"error": {...}}`.
#[derive(Debug, Serialize)]
pub struct CliError {
    #[serde(skip)]
    pub exit_code: i32,
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub termination: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    error: &'a CliError,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            exit_code: 2,
            kind: "Usage".into(),
            message: message.into(),
            termination: None,
            t: None,
        }
    }

    pub fn runtime(kind: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            exit_code: 1,
            kind: kind.into(),
            message: message.into(),
            termination: None,
            t: None,
        }
    }

    pub fn io(err: io::Error) -> Self {
        if err.kind() == io::ErrorKind::BrokenPipe {
            return Self {
                exit_code: 0,
                ..Self::runtime("BrokenPipe", err.to_string())
            };
        }
        Self::runtime("Io", err.to_string())
    }

    pub fn report(&self) {
        let text = serde_json::to_string(&Envelope { error: self }).expect("error object serializes");
        eprintln!("{text}");
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let exit_code = match err {
            Error::NoBracket { .. }
            | Error::Inconclusive { .. }
            | Error::NotClosed
            | Error::IntegrationFailed { .. } => 1,
            _ => 2,
        };
        let t = match err {
            Error::IntegrationFailed { t, .. } | Error::Inconclusive { t } => Some(t),
            _ => None,
        };
        Self {
            exit_code,
            kind: err.kind().into(),
            message: err.to_string(),
            termination: None,
            t,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> Self {
        Self::io(err)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        Self::runtime("Serialization", err.to_string())
    }
}

pub type Out = Box<dyn Write>;

pub fn open(path: Option<&Path>) -> Result<Out, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Pretty JSON followed by a newline.
pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Shortest round-trip text, identical to the JSON rendering of finite
/// values; non-finite values print as `NaN`, `inf`, `-inf`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite floats serialize")
    } else {
        x.to_string()
    }
}

pub fn write_nums(out: &mut dyn Write, row: &[f64]) -> io::Result<()> {
    write_csv_row(out, row.iter().map(|&x| num(x)))
}

pub fn write_csv_row<I>(out: &mut dyn Write, fields: I) -> io::Result<()>
where
    I: IntoIterator,
    I::Item: Display,
{
    let mut first = true;
    for field in fields {
        if !first {
            out.write_all(b",")?;
        }
        first = false;
        write!(out, "{field}")?;
    }
    out.write_all(b"\n")
}

/// Empty field for a missing value.
pub fn opt<T: Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
