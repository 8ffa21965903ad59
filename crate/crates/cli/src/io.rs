use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use nonfrac_core::Error;

/// Failure categories, mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters or input files (exit 2).
    Usage(String),
    /// Numerical failure or output I/O (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Runtime(_) => ExitCode::from(1),
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Accumulates CSV text: one `#` comment line, one header, data rows.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(echo: &[(&str, String)], header: &[&str]) -> Self {
        let mut text = String::from("#");
        for (k, v) in echo {
            let _ = write!(text, " {k}={v}");
        }
        text.push('\n');
        text.push_str(&header.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row<I, T>(&mut self, fields: I)
    where
        I: IntoIterator<Item = T>,
        T: std::fmt::Display,
    {
        let fields: Vec<String> = fields.into_iter().map(|f| f.to_string()).collect();
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

/// Write to `out` via a temporary file in the same directory and a rename,
/// or to stdout when no path is given.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    let Some(path) = out else {
        let mut stdout = io::stdout().lock();
        return stdout
            .write_all(bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Runtime(format!("cannot write to stdout: {e}")));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let fail = |e: &dyn std::fmt::Display| CliError::Runtime(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| fail(&e))?;
    tmp.write_all(bytes).map_err(|e| fail(&e))?;
    tmp.as_file().sync_all().map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

/// Read one numeric column. Lines starting with `#` and a single leading
/// non-numeric header line are skipped; the first value of each row is used.
pub fn read_column(path: &Path) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    let mut seen_header = false;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.split(',').next().unwrap_or("").trim();
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => return Err(usage(format!("{}:{}: non-finite value {field:?}", path.display(), i + 1))),
            Err(_) if values.is_empty() && !seen_header => seen_header = true,
            Err(_) => return Err(usage(format!("{}:{}: cannot parse {field:?} as a number", path.display(), i + 1))),
        }
    }
    if values.is_empty() {
        return Err(usage(format!("{}: no numeric values found", path.display())));
    }
    Ok(values)
}
