//! Relativistic electron parameters, sideband wave vectors and the Talbot
//! distance.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{
    ELECTRON_MASS, ELECTRON_REST_ENERGY_EV, ELEMENTARY_CHARGE, HBAR, HBAR_C_EV_M, SPEED_OF_LIGHT,
};
use crate::error::{domain, Result};

/// Electron beam parameters derived from the kinetic energy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElectronParams {
    /// eV
    pub kinetic_energy: f64,
    pub gamma: f64,
    /// v / c
    pub beta_v: f64,
    /// m/s
    pub velocity: f64,
    /// rad/m
    pub k0: f64,
    /// Total energy including rest mass, eV.
    pub total_energy: f64,
}

impl ElectronParams {
    /// Relativistic momentum p c in eV.
    pub fn momentum_ev(&self) -> f64 {
        self.gamma * self.beta_v * ELECTRON_REST_ENERGY_EV
    }
}

/// Optical mode parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonParams {
    /// eV
    pub photon_energy: f64,
    /// rad/s
    pub omega0: f64,
    /// Optical period, s.
    pub tau0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagationConstants {
    /// Talbot distance, m.
    pub z_talbot: f64,
}

/// How the sideband wave vector k_ℓ is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DispersionMode {
    /// k₀ + ℓω₀/v − 2πℓ²/z_T
    #[default]
    Quadratic,
    /// ħ⁻¹ sqrt(E_ℓ²/c² − m_e²c²)
    Exact,
}

pub fn electron_from_kinetic_energy(kinetic_energy: f64) -> Result<ElectronParams> {
    if !(kinetic_energy.is_finite() && kinetic_energy > 0.0) {
        return domain(format!(
            "electron kinetic energy must be positive, got {kinetic_energy}"
        ));
    }
    let gamma = 1.0 + kinetic_energy / ELECTRON_REST_ENERGY_EV;
    // 1 − 1/γ² = (γ−1)(γ+1)/γ², which keeps precision when γ → 1
    let beta_v = ((gamma - 1.0) * (gamma + 1.0)).sqrt() / gamma;
    let velocity = beta_v * SPEED_OF_LIGHT;
    let k0 = gamma * ELECTRON_MASS * velocity / HBAR;
    Ok(ElectronParams {
        kinetic_energy,
        gamma,
        beta_v,
        velocity,
        k0,
        total_energy: gamma * ELECTRON_REST_ENERGY_EV,
    })
}

pub fn photon_from_energy(photon_energy: f64) -> Result<PhotonParams> {
    if !(photon_energy.is_finite() && photon_energy > 0.0) {
        return domain(format!(
            "photon energy must be positive, got {photon_energy}"
        ));
    }
    let omega0 = photon_energy * ELEMENTARY_CHARGE / HBAR;
    Ok(PhotonParams {
        photon_energy,
        omega0,
        tau0: 2.0 * PI / omega0,
    })
}

/// z_T = 4π m_e v³ γ³ / (ħ ω₀²)
pub fn talbot_distance(e: &ElectronParams, p: &PhotonParams) -> PropagationConstants {
    let vg = e.velocity * e.gamma;
    let z_talbot = 4.0 * PI * ELECTRON_MASS * vg * vg * vg / (HBAR * p.omega0 * p.omega0);
    PropagationConstants { z_talbot }
}

/// k_ℓ − k₀ in rad/m.
///
/// The exact branch is evaluated as a difference of squares,
/// (E_ℓ² − E₀²) / ((ħc)² (k_ℓ + k₀)), so that the offset keeps full relative
/// precision even though k₀ is twelve orders of magnitude larger.
pub fn sideband_offset(
    e: &ElectronParams,
    p: &PhotonParams,
    consts: &PropagationConstants,
    ell: i64,
    mode: DispersionMode,
) -> Result<f64> {
    let l = ell as f64;
    match mode {
        DispersionMode::Quadratic => {
            Ok(l * p.omega0 / e.velocity - 2.0 * PI * l * l / consts.z_talbot)
        }
        DispersionMode::Exact => {
            if ell == 0 {
                return Ok(0.0);
            }
            let shift = l * p.photon_energy;
            let e_ell = e.total_energy + shift;
            let kinetic = e_ell - ELECTRON_REST_ENERGY_EV;
            if kinetic.is_nan() || kinetic <= 0.0 {
                return domain(format!(
                    "sideband {ell} is kinematically forbidden (E_ℓ = {e_ell} eV at or below rest energy)"
                ));
            }
            // p_ℓ² c² = (E_ℓ − mc²)(E_ℓ + mc²)
            let p_ell = (kinetic * (e_ell + ELECTRON_REST_ENERGY_EV)).sqrt();
            let p0 = e.momentum_ev();
            let dp = shift * (2.0 * e.total_energy + shift) / (p_ell + p0);
            Ok(dp / HBAR_C_EV_M)
        }
    }
}

/// Absolute sideband wave vector k_ℓ in rad/m. For ℓ = 0 this is k₀ exactly
/// in either mode.
pub fn sideband_wavevector(
    e: &ElectronParams,
    p: &PhotonParams,
    consts: &PropagationConstants,
    ell: i64,
    mode: DispersionMode,
) -> Result<f64> {
    Ok(e.k0 + sideband_offset(e, p, consts, ell, mode)?)
}

/// Propagation phase per unit length left after removing k₀ and the linear
/// ℓω₀/v term, i.e. the part that survives in the co-moving frame τ = t − z/v.
/// Quadratic mode gives −2πℓ²/z_T.
pub fn dispersion_rate(
    e: &ElectronParams,
    p: &PhotonParams,
    consts: &PropagationConstants,
    ell: i64,
    mode: DispersionMode,
) -> Result<f64> {
    let l = ell as f64;
    match mode {
        DispersionMode::Quadratic => Ok(-2.0 * PI * l * l / consts.z_talbot),
        DispersionMode::Exact => {
            Ok(sideband_offset(e, p, consts, ell, mode)? - l * p.omega0 / e.velocity)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath at 40 digits with the constants in `crate::constants`
    const GAMMA_100KEV: f64 = 1.195_695_118_355_918_3;
    const BETA_100KEV: f64 = 0.548_220_861_952_356_8;
    const K0_100KEV: f64 = 1.697_499_097_419_710_8e12;
    const ZT_100KEV_1P5EV: f64 = 0.158_621_432_088_877_3;
    const ZT_100KEV_3EV: f64 = 0.039_655_358_022_219_33;

    fn setup() -> (ElectronParams, PhotonParams, PropagationConstants) {
        let e = electron_from_kinetic_energy(100_000.0).unwrap();
        let p = photon_from_energy(1.5).unwrap();
        let c = talbot_distance(&e, &p);
        (e, p, c)
    }

    #[test]
    fn electron_100kev() {
        let e = electron_from_kinetic_energy(100_000.0).unwrap();
        assert!((e.gamma - GAMMA_100KEV).abs() < 1e-14);
        assert!((e.gamma - 1.1956947).abs() < 1e-6);
        assert!((e.beta_v - BETA_100KEV).abs() < 1e-14);
        assert!((e.k0 / K0_100KEV - 1.0).abs() < 1e-13);
        assert!((e.total_energy - GAMMA_100KEV * 510_998.95).abs() < 1e-8);
        assert!(e.beta_v > 0.0 && e.beta_v < 1.0);
    }

    #[test]
    fn rest_frame_limit() {
        let e = electron_from_kinetic_energy(1e-9).unwrap();
        assert!((e.gamma - 1.0).abs() < 1e-14);
        assert!(e.beta_v > 0.0 && e.beta_v < 1e-6);
    }

    #[test]
    fn rejects_bad_energy() {
        assert!(electron_from_kinetic_energy(0.0).is_err());
        assert!(electron_from_kinetic_energy(-1.0).is_err());
        assert!(electron_from_kinetic_energy(f64::NAN).is_err());
        assert!(photon_from_energy(0.0).is_err());
    }

    #[test]
    fn photon_period() {
        let p = photon_from_energy(1.5).unwrap();
        assert!((p.tau0 * p.omega0 - 2.0 * PI).abs() < 1e-14);
        assert!((p.tau0 / 2.757_111_796_259_904e-15 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn talbot_headline() {
        let (_, _, c) = setup();
        assert!((c.z_talbot / ZT_100KEV_1P5EV - 1.0).abs() < 1e-13);
        assert!((c.z_talbot / 0.159 - 1.0).abs() < 5e-3);
    }

    #[test]
    fn talbot_scales_inverse_square() {
        let e = electron_from_kinetic_energy(100_000.0).unwrap();
        let z1 = talbot_distance(&e, &photon_from_energy(1.5).unwrap()).z_talbot;
        let z2 = talbot_distance(&e, &photon_from_energy(3.0).unwrap()).z_talbot;
        assert!((z1 / z2 - 4.0).abs() < 1e-13);
        assert!((z2 / ZT_100KEV_3EV - 1.0).abs() < 1e-13);
        assert!((z2 / 0.03975 - 1.0).abs() < 5e-3);
    }

    #[test]
    fn zero_sideband_is_k0() {
        let (e, p, c) = setup();
        for mode in [DispersionMode::Quadratic, DispersionMode::Exact] {
            assert_eq!(sideband_wavevector(&e, &p, &c, 0, mode).unwrap(), e.k0);
        }
    }

    #[test]
    fn forbidden_sideband() {
        let e = electron_from_kinetic_energy(10.0).unwrap();
        let p = photon_from_energy(1.5).unwrap();
        let c = talbot_distance(&e, &p);
        assert!(sideband_offset(&e, &p, &c, -6, DispersionMode::Exact).is_ok());
        assert!(sideband_offset(&e, &p, &c, -7, DispersionMode::Exact).is_err());
    }

    #[test]
    fn second_difference_matches_talbot() {
        let (e, p, c) = setup();
        let k = |l| sideband_offset(&e, &p, &c, l, DispersionMode::Exact).unwrap();
        let second = k(1) + k(-1) - 2.0 * k(0);
        // mpmath: k₁ + k₋₁ − 2k₀ = −79.222400465425
        assert!((second + 79.222_400_465_425_07).abs() < 1e-7);
        let coeff_talbot = -4.0 * PI / c.z_talbot;
        assert!((second / coeff_talbot - 1.0).abs() < 1e-5);
    }

    #[test]
    fn exact_minus_quadratic_is_cubic() {
        // mpmath reference for (k_ℓ^exact − k_ℓ^quad) at 100 keV / 1.5 eV
        let (e, p, c) = setup();
        let cases = [
            (10, 0.323_531_077_935_329),
            (15, 1.091_865_002_245_82),
            (30, 8.733_663_025_548_12),
            (-30, -8.738_693_394_298_69),
        ];
        for (l, expected) in cases {
            let ex = sideband_offset(&e, &p, &c, l, DispersionMode::Exact).unwrap();
            let q = sideband_offset(&e, &p, &c, l, DispersionMode::Quadratic).unwrap();
            assert!(
                ((ex - q) - expected).abs() < 1e-6 * expected.abs().max(1.0),
                "l={l}"
            );
        }
    }

    #[test]
    fn exact_and_quadratic_agree_near_the_plate() {
        // Over the few-mm propagation used for compression the cubic
        // remainder is negligible for every populated sideband.
        let (e, p, c) = setup();
        for l in -30..=30 {
            let ex = sideband_offset(&e, &p, &c, l, DispersionMode::Exact).unwrap();
            let q = sideband_offset(&e, &p, &c, l, DispersionMode::Quadratic).unwrap();
            assert!((ex - q).abs() * 1e-3 < 1e-2, "l={l}");
        }
    }

    #[test]
    fn dispersion_rate_quadratic() {
        let (e, p, c) = setup();
        let r = dispersion_rate(&e, &p, &c, 3, DispersionMode::Quadratic).unwrap();
        assert!((r + 2.0 * PI * 9.0 / c.z_talbot).abs() < 1e-12);
        let rx = dispersion_rate(&e, &p, &c, 3, DispersionMode::Exact).unwrap();
        assert!((rx - r).abs() < 1e-2);
    }
}
