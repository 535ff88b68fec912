// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("element index {index} out of range for ring of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("order {order} exceeds size cap {cap}")]
    SizeCapExceeded { order: u64, cap: u64 },

    #[error("residue field of even order {0}: closed forms require odd residue order")]
    EvenCharacteristicUnsupported(u64),

    #[error("ring {ring} is outside the closed-form classes (needs odd residue orders with at most one factor congruent to 3 mod 4)")]
    UnsupportedRingClass { ring: String },

    #[error("index sets A and B overlap")]
    OverlappingSets,

    #[error("index {0} is not a valid factor position")]
    BadFactorIndex(usize),

    #[error("ring classification does not match the requested evaluator")]
    WrongClassification,

    #[error("sign of {0} cannot be certified in double precision")]
    PrecisionLoss(String),

    #[error("graph has loops; operation requires a simple graph")]
    LoopsPresent,

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("character sum has imaginary residue {0:e}")]
    NonRealCharacterSum(f64),

    #[error("spectrum cardinality {closed} does not match numeric length {numeric}")]
    CardinalityMismatch { closed: u64, numeric: usize },

    #[error("closed-form value {0} is not an integer")]
    NonIntegerResult(String),

    #[error("graph is disconnected (top eigenvalue multiplicity {0})")]
    Disconnected(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
