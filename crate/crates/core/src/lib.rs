//! Free-electron wave-packet shaping by quantum light.
//!
//! The pipeline is: photon-number amplitudes ([`light`]) → PINEM scattering
//! ([`pinem`]) → free propagation of the reduced electron density matrix
//! ([`propagation`]) → excitation of a downstream sample mode ([`sample`]).
//! Units are SI except energies, which are in eV.

pub mod constants;
pub mod error;
pub mod kinematics;
pub mod light;
pub mod numerics;
pub mod pinem;
pub mod propagation;
pub mod sample;

pub use error::{Error, Result};
