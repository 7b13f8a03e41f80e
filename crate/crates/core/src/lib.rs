//! Fidelity versus energy difference for pure harmonic-oscillator states.
//!
//! - [`fock`]: truncated number-state vectors, overlaps and photon statistics.
//! - [`families`]: coherent, squeezed vacuum, negative binomial and binomial
//!   states, with closed-form pairwise fidelity and energy.
//! - [`bounds`]: maximal fidelity at a fixed energy gap, its inverse and the
//!   maximizing parameters.
//! - [`search`]: a grid plus golden-section oracle that re-derives the bounds
//!   numerically.
//! - [`cli`]: the `fidbound` command-line front end.

// `!(x >= 0.0)` style checks are used on purpose so NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod families;
pub mod fock;
pub mod output;
pub mod search;

pub use bounds::{BoundResult, Branch, EnergyGap, Sign};
pub use error::{Error, Result};
pub use families::{Family, FamilyParam};
pub use fock::FockVector;
pub use search::{GridSpec, VerifyReport};
