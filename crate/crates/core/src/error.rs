use std::path::PathBuf;

/// Errors raised by the engine. Each variant maps onto one CLI exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Non-finite input, out-of-range argument or singular computation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An operation was called outside the regime it is defined for.
    #[error("scope error: {0}")]
    Scope(String),
    /// A repression-dependent quantity was requested while ε ≤ 0.
    #[error("inactive regime: {0}")]
    InactiveRegime(String),
    /// Too little data or an ill-posed regression.
    #[error("estimation error: {0}")]
    Estimation(String),
    /// Invalid configuration value or structure.
    #[error("config error: {0}")]
    Config(String),
    /// Config text that could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// CLI exit code: 2 for configuration problems, 3 for numeric or domain failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse { .. } | Error::Io { .. } => 2,
            _ => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects NaN and infinities with an error naming the offending argument.
pub(crate) fn finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {x}")))
    }
}
