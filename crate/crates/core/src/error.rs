use std::path::PathBuf;

use crate::lambda::ReversedWalk;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid tilt: {0}")]
    InvalidTilt(String),

    #[error("invalid rational `{input}`: {reason}")]
    InvalidRational { input: String, reason: String },

    #[error("invalid window: radius {radius} and height cap {height_cap} must both be >= 1")]
    InvalidWindow { radius: i64, height_cap: i64 },

    #[error("{what} out of domain: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("invalid simplex weights {weights:?}: {reason}")]
    InvalidWeights { weights: [f64; 4], reason: String },

    #[error("expected shell time diverges at q = 0")]
    Divergent,

    #[error("reversed walk censored after {} rounds: shell budget {budget} exhausted", partial.len())]
    CensoredWalk { partial: Box<ReversedWalk>, budget: usize },

    #[error("bracket [{q_lo}, {q_hi}] does not straddle target {target}: psi = {psi_lo} .. {psi_hi}")]
    Bracket {
        q_lo: f64,
        q_hi: f64,
        psi_lo: f64,
        psi_hi: f64,
        target: f64,
    },

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
