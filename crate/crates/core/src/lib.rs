//! Small stabilizer and codeword-stabilized (CWS) codes as magic state
//! distillation routines.
//!
//! A code is compiled into an exact one-round map on single-qubit Bloch
//! vectors ([`distill`]), which [`analysis`] iterates to find fixed points,
//! thresholds, tightness and yields. [`search`] sweeps every small CWS code
//! and [`registry`] holds the fully specified codes used for comparison.
//!
//! The numerical layers are generic over the floating point type; the
//! aliases below fix it to `f64`, which is what the search and CLI use.

pub mod analysis;
pub mod cli;
pub mod cws;
pub mod distill;
pub mod error;
pub mod pauli;
pub mod registry;
pub mod scalar;
pub mod search;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Bloch = distill::BlochVector<f64>;
pub type Map = distill::DistillationMap<f64>;
pub type Basis = cws::LogicalBasis<f64>;
pub type Report = analysis::CodeReport<f64>;
pub type Outcome = analysis::IterationOutcome<f64>;
pub type Complex = num_complex::Complex<f64>;
