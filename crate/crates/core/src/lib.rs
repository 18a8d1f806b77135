//! Dying-rabbit generalized Fibonacci sequences.
//!
//! A pair of rabbits matures `h` months after birth and breeds for `k`
//! months before dying. The number of live pairs `C_n^(k,h)` satisfies a
//! linear recurrence of order `k+h-1` whose characteristic polynomial is
//! `g_{k,h}(x) = x^(k+h-1) - x^(k-1) - ... - x - 1`.
//!
//! The crate is split by layer:
//!
//! - [`sequences`]: exact integer evaluation of the recurrences.
//! - [`charpoly`]: exact integer polynomial algebra (`g_{k,h}`, `p_h`, gcd).
//! - [`roots`]: the dominant root `alpha_{k,h}`, the full complex spectrum
//!   and the monotone grid of dominant roots.
//! - [`binet`]: Binet-style closed forms checked against the recurrence.
//! - [`report`]: JSON / CSV / plain renderings used by the CLI.

pub mod binet;
pub mod charpoly;
pub mod error;
pub mod numeric;
pub mod report;
pub mod roots;
pub mod sequences;

pub use error::{Error, Result};
pub use sequences::{InitialConditions, SequenceParams, SequenceWindow};

/// Working precision used when the caller does not choose one.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Environment variable consulted by the CLI for the default precision.
pub const PRECISION_ENV_VAR: &str = "DYINGRABBIT_PRECISION";
