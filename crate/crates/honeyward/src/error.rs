//! Error type shared across the toolkit.

/// Errors produced by the honeyward library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration: unknown KDF profile, bad policy key, out-of-range
    /// parameter, missing attacker resource.
    #[error("config error: {0}")]
    Config(String),

    /// Enrollment rejected: duplicate account, true-index mismatch, invalid uid.
    #[error("enroll error: {0}")]
    Enroll(String),

    /// Decoy generation failed: duplicate sweetwords or constraints unsatisfiable
    /// within the retry bound.
    #[error("generation error: {0}")]
    Generation(String),

    /// Malformed input file. `line` is 1-based; 0 means the input as a whole.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Corpus model training failed.
    #[error("train error: {0}")]
    Train(String),

    /// Honeychecker protocol violation (syntax, range, unknown account).
    #[error("protocol error: {0}")]
    Protocol(String),

    /// The honeychecker could not be reached; triggers the configured fail mode.
    #[error("checker unavailable: {0}")]
    CheckerUnavailable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
