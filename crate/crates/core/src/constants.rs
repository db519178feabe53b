//! CODATA 2018 constants. Every unit conversion in the crate goes through
//! this module.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Electron rest energy m_e c², eV.
pub const ELECTRON_REST_ENERGY_EV: f64 = 510_998.95;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Elementary charge, C (also J per eV).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Electron rest mass derived from the rest energy, kg.
pub const ELECTRON_MASS: f64 =
    ELECTRON_REST_ENERGY_EV * ELEMENTARY_CHARGE / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);

/// ħc in eV·m.
pub const HBAR_C_EV_M: f64 = HBAR * SPEED_OF_LIGHT / ELEMENTARY_CHARGE;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_values() {
        assert_eq!(HBAR, 1.054571817e-34);
        assert_eq!(ELECTRON_REST_ENERGY_EV, 510998.95);
        assert_eq!(SPEED_OF_LIGHT, 299792458.0);
        // m_e = 9.1093837015e-31 kg to the precision of the rest energy
        assert!((ELECTRON_MASS / 9.1093837015e-31 - 1.0).abs() < 1e-9);
        // ħc ≈ 197.3269804 MeV·fm
        assert!((HBAR_C_EV_M / 1.973269804e-7 - 1.0).abs() < 1e-9);
    }
}
