// SPDX-License-Identifier: Apache-2.0

//! Quadratic unitary Cayley graphs over finite commutative rings: ring
//! arithmetic, graph construction, closed-form and numeric spectra, and the
//! invariants derived from them.

pub mod cli;
pub mod closed;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod oracle;
pub mod qext;
pub mod report;
pub mod ring;
pub mod survey;
pub mod verify;

pub use closed::{closed_spectrum, Spectrum, SpectrumEntry};
pub use error::{Error, Result};
pub use qext::QuadExt;
pub use ring::{Classification, LocalKind, LocalRing, LocalRingSpec, ProductRing, RingSpec};
