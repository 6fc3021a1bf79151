//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by factorizations, searches, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A pivot (or residual column norm) fell below the degenerate
    /// threshold before the requested block size was reached.
    #[error("rank deficient at step {step}: pivot magnitude {magnitude:.3e} is below the degenerate threshold")]
    RankDeficient { step: usize, magnitude: f64 },

    /// A maxvol search accepted more swaps than its configured cap.
    #[error("iteration cap exceeded: more than {cap} accepted swaps")]
    IterationCap { cap: usize },

    /// The bidiagonal QR iteration did not converge.
    #[error("SVD did not converge within {max_steps} implicit QR steps")]
    SvdNonConvergence { max_steps: usize },

    /// A triangular solve met a zero diagonal entry.
    #[error("triangular matrix is singular: zero diagonal entry at index {index}")]
    SingularDiagonal { index: usize },

    /// An index was outside the valid range.
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    /// Brute-force enumeration would visit too many submatrices.
    #[error("size guard exceeded: {candidates} candidate submatrices (limit {limit})")]
    SizeGuard { candidates: u128, limit: u128 },

    /// A caller-supplied argument violated a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Matrix Market parsing failed.
    #[error("matrix market parse error at line {line}: {message}")]
    MatrixMarket { line: usize, message: String },

    /// Underlying I/O failure.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
