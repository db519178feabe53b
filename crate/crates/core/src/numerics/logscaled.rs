use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number stored as `exp(log_magnitude) · exp(i·phase)`.
///
/// Zero is `log_magnitude = −∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogScaledComplex {
    pub log_magnitude: f64,
    pub phase: f64,
}

impl LogScaledComplex {
    pub const ZERO: Self = Self {
        log_magnitude: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn new(log_magnitude: f64, phase: f64) -> Self {
        Self {
            log_magnitude,
            phase,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        Self {
            log_magnitude: z.norm().ln(),
            phase: z.arg(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_magnitude.exp(), self.phase)
    }

    /// Multiply by `exp(log_scale)`.
    pub fn scale_log(self, log_scale: f64) -> Self {
        Self {
            log_magnitude: self.log_magnitude + log_scale,
            phase: self.phase,
        }
    }
}

impl Mul for LogScaledComplex {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self {
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
            phase: self.phase + rhs.phase,
        }
    }
}
