//! Syndrome-based learning of Pauli fault rates in stabilizer circuits.
//!
//! The pipeline in one paragraph: a Clifford measurement circuit is lifted to
//! a spacetime Pauli group, where mid-circuit checks become commuting
//! syndrome extractors and circuit faults become spacetime Pauli insertions.
//! Averaged syndrome statistics determine the eigenvalues of a stochastic
//! Pauli fault model; taking logs turns eigenvalue estimation into a linear
//! system over fault classes, solved by subsampled least squares. The
//! recovered class rates feed a decoder-aware prediction of the logical
//! error probability that can be checked against exhaustive enumeration and
//! direct Monte Carlo.
//!
//! Module map:
//! - [`gf2`]: bit-packed GF(2) vectors, echelon bases, rank/solve/kernel.
//! - [`real`]: dense real matrices, least squares, singular values.
//! - [`pauli`]: phase-free Pauli strings on qubits and on spacetime slices.
//! - [`circuit`]: symplectic Clifford layers, circuit descriptions, fault
//!   propagation through the circuit.
//! - [`code`]: the spacetime gauge/measurement/logical group construction.
//! - [`fault`]: stochastic Pauli fault models, eigenvalues, syndrome priors.
//! - [`learnability`]: which fault rates syndrome data can identify.
//! - [`sampler`]: deterministic syndrome-shot sampling and shot-noise sizing.
//! - [`estimator`]: subsampled designs, rate recovery, restricted-isometry
//!   diagnostics.
//! - [`lep`]: decoder tables and predicted / exact / sampled logical error
//!   probabilities.
//! - [`experiments`]: reproducible numerical studies and their outputs.

pub mod circuit;
pub mod code;
pub mod estimator;
pub mod experiments;
pub mod fault;
pub mod gf2;
pub mod learnability;
pub mod lep;
pub mod manifest;
pub mod pauli;
pub mod plot;
pub mod real;
pub mod sampler;

use thiserror::Error;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input (Pauli literals, JSON schemas, CSV).
    #[error("parse error: {0}")]
    Parse(String),

    /// Dimension or index mismatch between operands.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A structural precondition on an input object failed.
    #[error("validation error: {0}")]
    Validation(String),

    /// An exact-enumeration guard was exceeded.
    #[error("size guard exceeded: {0}")]
    Guard(String),

    /// Numerical failure (rank deficiency, non-positive eigenvalue, ...).
    #[error("numerical error: {0}")]
    Numeric(String),

    /// The requested quantity is not identifiable from syndrome data.
    #[error("unlearnable: {0}")]
    Unlearnable(String),

    /// Filesystem or serialization failure.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
