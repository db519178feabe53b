//! Special functions evaluated stably at photon numbers of a few thousand.
//!
//! Everything that carries factorials or high-order polynomials is kept in
//! log-scaled form until the final exponentiation.

mod airy;
mod bessel;
mod factorial;
mod hermite;
mod laguerre;
mod logscaled;

pub use airy::{airy_ai, AIRY_AI_FIRST_ZERO, AIRY_AI_PRIME_AT_FIRST_ZERO};
pub use bessel::{bessel_j, bessel_j_nonneg};
pub use factorial::log_factorial;
pub use hermite::{hermite_log_scaled, hermite_sequence_log_scaled};
pub use laguerre::{laguerre_assoc, laguerre_assoc_log, laguerre_assoc_row_log, LogSigned};
pub use logscaled::LogScaledComplex;
