//! Free-space evolution of the reduced electron density matrix in the
//! co-moving, envelope-normalized frame:
//!
//! ```text
//! ρ̃(z, τ, τ′) = Σ_{ℓℓ′} C_{ℓℓ′} e^{i(θ_ℓ(z) − θ_ℓ′(z))} e^{−2πi(ℓτ − ℓ′τ′)/τ₀}
//! ```
//!
//! with θ_ℓ(z) = −2πℓ²z/z_T in quadratic mode and the exact relativistic
//! phase otherwise.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::kinematics::{
    dispersion_rate, electron_from_kinetic_energy, photon_from_energy, talbot_distance,
    DispersionMode, ElectronParams, PhotonParams, PropagationConstants,
};
use crate::numerics::bessel_j;
use crate::pinem::ModulatedElectronState;

/// Profiles whose max/min contrast is below this are treated as flat.
pub const FLAT_CONTRAST: f64 = 1e-6;

/// Minimum sampling accepted by [`fwhm_curve`].
pub const MIN_SAMPLES_PER_PERIOD: usize = 256;

/// Fraction of the global maximum a local maximum must exceed to count.
pub const PEAK_THRESHOLD: f64 = 0.2;

/// Electron and photon parameters plus the dispersion model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Beam {
    pub electron: ElectronParams,
    pub photon: PhotonParams,
    pub consts: PropagationConstants,
    pub mode: DispersionMode,
}

impl Beam {
    pub fn new(kinetic_energy: f64, photon_energy: f64, mode: DispersionMode) -> Result<Self> {
        let electron = electron_from_kinetic_energy(kinetic_energy)?;
        let photon = photon_from_energy(photon_energy)?;
        let consts = talbot_distance(&electron, &photon);
        Ok(Self {
            electron,
            photon,
            consts,
            mode,
        })
    }

    pub fn with_mode(self, mode: DispersionMode) -> Self {
        Self { mode, ..self }
    }

    pub fn z_talbot(&self) -> f64 {
        self.consts.z_talbot
    }

    pub fn tau0(&self) -> f64 {
        self.photon.tau0
    }

    /// dθ_ℓ/dz for ℓ = −L..=L.
    pub fn dispersion_rates(&self, l_max: usize) -> Result<Vec<f64>> {
        let l = l_max as i64;
        (-l..=l)
            .map(|ell| dispersion_rate(&self.electron, &self.photon, &self.consts, ell, self.mode))
            .collect()
    }
}

/// Photon-traced kernel C_{ℓℓ′} = Σ_n α_{n+ℓ}α*_{n+ℓ′} F_ℓ^n F_ℓ′^n.
#[derive(Clone, Debug)]
pub struct CoherenceMatrix {
    c: Array2<Complex64>,
    l_max: usize,
}

impl CoherenceMatrix {
    pub fn from_matrix(c: Array2<Complex64>) -> Result<Self> {
        let (r, k) = c.dim();
        if r != k || r % 2 == 0 {
            return domain(format!(
                "coherence matrix must be square with odd size, got {r}x{k}"
            ));
        }
        Ok(Self { c, l_max: r / 2 })
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.c
    }

    pub fn get(&self, ell: i64, ell_prime: i64) -> Complex64 {
        let l = self.l_max as i64;
        if ell.abs() > l || ell_prime.abs() > l {
            return Complex64::new(0.0, 0.0);
        }
        self.c[[(ell + l) as usize, (ell_prime + l) as usize]]
    }

    pub fn trace(&self) -> Complex64 {
        self.c.diag().iter().sum()
    }

    /// max |C_{ℓℓ′} − C*_{ℓ′ℓ}|
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.c.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.c[[i, j]] - self.c[[j, i]].conj()).norm());
            }
        }
        worst
    }
}

/// The arg(−β₀) sideband phase is removed, which places the time origin at t_p.
pub fn coherence_matrix(m: &ModulatedElectronState) -> CoherenceMatrix {
    let mut c = m.pair_kernel();
    let phase = m.coupling().phase();
    let l = m.l_max() as i64;
    if phase != 0.0 {
        for ((i, j), v) in c.indexed_iter_mut() {
            let k = (i as i64 - l) - (j as i64 - l);
            *v *= Complex64::from_polar(1.0, -(k as f64) * phase);
        }
    }
    CoherenceMatrix {
        c,
        l_max: m.l_max(),
    }
}

/// Values on a rectangular grid with their axes (metres or seconds).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityGrid<T> {
    pub values: Array2<T>,
    pub row_axis: Vec<f64>,
    pub col_axis: Vec<f64>,
    pub mode: DispersionMode,
}

/// `n` points covering one period starting at `start`, endpoint excluded.
pub fn period_grid(start: f64, period: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| start + period * j as f64 / n as f64)
        .collect()
}

/// `n` points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|j| a + (b - a) * j as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn sideband_phasors(rates: &[f64], z: f64, tau: f64, tau0: f64) -> Vec<Complex64> {
    let l = (rates.len() / 2) as i64;
    rates
        .iter()
        .enumerate()
        .map(|(i, rate)| {
            let ell = i as i64 - l;
            let ph = rate * z - 2.0 * PI * ell as f64 * (tau / tau0);
            Complex64::from_polar(1.0, ph)
        })
        .collect()
}

/// ρ̃(z, τ, τ′) on the product grid τ × τ′.
pub fn density_matrix(
    cm: &CoherenceMatrix,
    beam: &Beam,
    z: f64,
    tau_grid: &[f64],
    tau_prime_grid: &[f64],
) -> Result<DensityGrid<Complex64>> {
    let rates = beam.dispersion_rates(cm.l_max())?;
    let tau0 = beam.tau0();
    let c = cm.matrix();
    // b(τ′)_ℓ = Σ_ℓ′ C_{ℓℓ′} a*_ℓ′(τ′), then ρ̃ = a(τ)·b(τ′)
    let b_cols: Vec<Vec<Complex64>> = tau_prime_grid
        .par_iter()
        .map(|&tp| {
            let a = sideband_phasors(&rates, z, tp, tau0);
            c.rows()
                .into_iter()
                .map(|row| row.iter().zip(&a).map(|(cv, av)| cv * av.conj()).sum())
                .collect()
        })
        .collect();
    let rows: Vec<Vec<Complex64>> = tau_grid
        .par_iter()
        .map(|&t| {
            let a = sideband_phasors(&rates, z, t, tau0);
            b_cols
                .iter()
                .map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect();
    Ok(DensityGrid {
        values: to_array(rows, tau_prime_grid.len()),
        row_axis: tau_grid.to_vec(),
        col_axis: tau_prime_grid.to_vec(),
        mode: beam.mode,
    })
}

fn to_array<T: Clone + Default>(rows: Vec<Vec<T>>, ncols: usize) -> Array2<T> {
    let nrows = rows.len();
    let flat: Vec<T> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((nrows, ncols), flat).expect("rows have equal length")
}

/// Diagonal Fourier coefficients D_k(z) = Σ_{ℓ−ℓ′=k} C_{ℓℓ′} e^{i(θ_ℓ−θ_ℓ′)},
/// k = 0..=2L; negative k follow from D_{−k} = D_k*.
fn diagonal_coefficients(cm: &CoherenceMatrix, rates: &[f64], z: f64) -> Vec<Complex64> {
    let dim = rates.len();
    let rot: Vec<Complex64> = rates
        .iter()
        .map(|r| Complex64::from_polar(1.0, r * z))
        .collect();
    let c = cm.matrix();
    (0..dim)
        .map(|k| {
            (k..dim)
                .map(|i| c[[i, i - k]] * rot[i] * rot[i - k].conj())
                .sum()
        })
        .collect()
}

fn evaluate_profile(d: &[Complex64], tau: f64, tau0: f64) -> f64 {
    let mut acc = d[0].re;
    for (k, dk) in d.iter().enumerate().skip(1) {
        acc += 2.0 * (dk * Complex64::from_polar(1.0, -2.0 * PI * k as f64 * (tau / tau0))).re;
    }
    acc
}

/// ρ̃(z, τ, τ) on a single τ grid.
pub fn profile(cm: &CoherenceMatrix, beam: &Beam, z: f64, tau_grid: &[f64]) -> Result<Vec<f64>> {
    let rates = beam.dispersion_rates(cm.l_max())?;
    let d = diagonal_coefficients(cm, &rates, z);
    let tau0 = beam.tau0();
    Ok(tau_grid
        .iter()
        .map(|&t| evaluate_profile(&d, t, tau0))
        .collect())
}

/// ρ̃(z, τ, τ) on the z × τ grid.
pub fn profile_map(
    cm: &CoherenceMatrix,
    beam: &Beam,
    z_grid: &[f64],
    tau_grid: &[f64],
) -> Result<DensityGrid<f64>> {
    let rates = beam.dispersion_rates(cm.l_max())?;
    let tau0 = beam.tau0();
    let rows: Vec<Vec<f64>> = z_grid
        .par_iter()
        .map(|&z| {
            let d = diagonal_coefficients(cm, &rates, z);
            tau_grid
                .iter()
                .map(|&t| evaluate_profile(&d, t, tau0))
                .collect()
        })
        .collect();
    Ok(DensityGrid {
        values: to_array(rows, tau_grid.len()),
        row_axis: z_grid.to_vec(),
        col_axis: tau_grid.to_vec(),
        mode: beam.mode,
    })
}

/// |Σ_ℓ J_ℓ(2|β|) e^{iθ_ℓ(z)} e^{−2πiℓτ/τ₀}|², the high-fluence limit.
pub fn classical_profile(
    beta_eff: f64,
    beam: &Beam,
    l_max: usize,
    z: f64,
    tau_grid: &[f64],
) -> Result<Vec<f64>> {
    let rates = beam.dispersion_rates(l_max)?;
    let l = l_max as i64;
    let j: Vec<f64> = (-l..=l).map(|ell| bessel_j(ell, 2.0 * beta_eff)).collect();
    let tau0 = beam.tau0();
    Ok(tau_grid
        .iter()
        .map(|&t| {
            sideband_phasors(&rates, z, t, tau0)
                .iter()
                .zip(&j)
                .map(|(a, jl)| a * jl)
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect())
}

fn is_flat(values: &[f64]) -> bool {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max.is_nan() || max <= 0.0 || (max - min) / max < FLAT_CONTRAST
}

/// Full width at half maximum of the tallest peak of a periodic profile
/// sampled uniformly over one period `period`. Ties go to the sample with the
/// smallest |τ|. Flat profiles and peaks that never drop below half maximum
/// within a period report the full period.
pub fn fwhm_periodic(values: &[f64], tau_grid: &[f64], period: f64) -> f64 {
    let n = values.len();
    if n < 3 || is_flat(values) {
        return period;
    }
    let mut peak = 0;
    for j in 1..n {
        let better = values[j] > values[peak]
            || (values[j] == values[peak] && tau_grid[j].abs() < tau_grid[peak].abs());
        if better {
            peak = j;
        }
    }
    let half = 0.5 * values[peak];
    let dt = period / n as f64;
    let at = |k: i64| values[k.rem_euclid(n as i64) as usize];

    // walk right until below half, then interpolate
    let mut right = None;
    for s in 1..n as i64 {
        let (a, b) = (at(peak as i64 + s - 1), at(peak as i64 + s));
        if b < half {
            right = Some((s - 1) as f64 + (a - half) / (a - b));
            break;
        }
    }
    let mut left = None;
    for s in 1..n as i64 {
        let (a, b) = (at(peak as i64 - s + 1), at(peak as i64 - s));
        if b < half {
            left = Some((s - 1) as f64 + (a - half) / (a - b));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => ((l + r) * dt).min(period),
        _ => period,
    }
}

/// (z, FWHM in seconds) for every z.
pub fn fwhm_curve(
    cm: &CoherenceMatrix,
    beam: &Beam,
    z_grid: &[f64],
    samples_per_period: usize,
) -> Result<Vec<(f64, f64)>> {
    if samples_per_period < MIN_SAMPLES_PER_PERIOD {
        return domain(format!(
            "FWHM needs at least {MIN_SAMPLES_PER_PERIOD} samples per period, got {samples_per_period}"
        ));
    }
    let tau0 = beam.tau0();
    let tau = period_grid(-0.5 * tau0, tau0, samples_per_period);
    let map = profile_map(cm, beam, z_grid, &tau)?;
    Ok(z_grid
        .iter()
        .zip(map.values.rows())
        .map(|(&z, row)| {
            (
                z,
                fwhm_periodic(row.as_slice().expect("standard layout"), &tau, tau0),
            )
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeakReport {
    pub count: usize,
    pub positions: Vec<f64>,
}

/// Local maxima of a periodic profile above [`PEAK_THRESHOLD`] of the global
/// maximum; maxima within 2 samples of each other are merged.
pub fn double_peak_detect(values: &[f64], tau_grid: &[f64]) -> PeakReport {
    let n = values.len();
    if n < 3 || is_flat(values) {
        return PeakReport {
            count: 0,
            positions: Vec::new(),
        };
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let threshold = PEAK_THRESHOLD * max;
    let mut idx: Vec<usize> = (0..n)
        .filter(|&j| {
            let prev = values[(j + n - 1) % n];
            let next = values[(j + 1) % n];
            values[j] > threshold && values[j] > prev && values[j] >= next
        })
        .collect();

    // merge neighbours (periodically), keeping the taller one
    let mut merged: Vec<usize> = Vec::new();
    idx.sort_unstable();
    for j in idx {
        match merged.last_mut() {
            Some(last) if j - *last <= 2 => {
                if values[j] > values[*last] {
                    *last = j;
                }
            }
            _ => merged.push(j),
        }
    }
    if merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().expect("non-empty");
        if first + n - last <= 2 {
            if values[last] > values[first] {
                merged[0] = last;
            }
            merged.pop();
        }
    }
    PeakReport {
        count: merged.len(),
        positions: merged.iter().map(|&j| tau_grid[j]).collect(),
    }
}

/// ρ̃(z,τ,τ)/2 + ρ̃(z,τ′,τ′)/2 + Re{e^{−iφ} ρ̃(z,τ,τ′)} with τ′ = τ + (z − z′)/v.
pub fn self_interference(
    cm: &CoherenceMatrix,
    beam: &Beam,
    z: f64,
    z_prime: f64,
    phi: f64,
    tau_grid: &[f64],
) -> Result<Vec<f64>> {
    let rates = beam.dispersion_rates(cm.l_max())?;
    let tau0 = beam.tau0();
    let shift = (z - z_prime) / beam.electron.velocity;
    let c = cm.matrix();
    let rot = Complex64::from_polar(1.0, -phi);
    let pair = |t: f64, tp: f64| -> Complex64 {
        let a = sideband_phasors(&rates, z, t, tau0);
        let b = sideband_phasors(&rates, z, tp, tau0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, ai) in a.iter().enumerate() {
            let row: Complex64 = c.row(i).iter().zip(&b).map(|(cv, bv)| cv * bv.conj()).sum();
            acc += ai * row;
        }
        acc
    };
    Ok(tau_grid
        .par_iter()
        .map(|&t| {
            let tp = t + shift;
            0.5 * pair(t, t).re + 0.5 * pair(tp, tp).re + (rot * pair(t, tp)).re
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::light::{coherent_state, fock_state, DEFAULT_TAIL_EPSILON};
    use crate::pinem::{modulate, CouplingCoefficient, SIDEBAND_TAIL_TOLERANCE};

    fn beam() -> Beam {
        Beam::new(100e3, 1.5, DispersionMode::Quadratic).unwrap()
    }

    fn coherent_cm(n_mean: f64, beta0: Complex64) -> CoherenceMatrix {
        let b = beam();
        let st = coherent_state(n_mean, DEFAULT_TAIL_EPSILON).unwrap();
        let c = CouplingCoefficient::new(beta0, n_mean, &b.photon).unwrap();
        let (_, m) = modulate(&st, &c, SIDEBAND_TAIL_TOLERANCE).unwrap();
        coherence_matrix(&m)
    }

    #[test]
    fn coherence_matrix_basics() {
        let cm = coherent_cm(625.0, Complex64::new(-0.2, 0.0));
        assert!((cm.trace().re - 1.0).abs() < 1e-8);
        assert!(cm.hermiticity_residual() < 1e-12);
    }

    #[test]
    fn fock_is_flat() {
        let b = beam();
        let st = fock_state(40);
        let c = CouplingCoefficient::real_negative(0.2, 40.0, &b.photon).unwrap();
        let (_, m) = modulate(&st, &c, SIDEBAND_TAIL_TOLERANCE).unwrap();
        let cm = coherence_matrix(&m);
        for ((i, j), v) in cm.matrix().indexed_iter() {
            if i != j {
                assert_eq!(*v, Complex64::new(0.0, 0.0));
            }
        }
        let tau = period_grid(0.0, b.tau0(), 64);
        let map = profile_map(&cm, &b, &linspace(0.0, 0.3, 20), &tau).unwrap();
        assert!(map.values.iter().all(|v| (v - 1.0).abs() < 1e-10));
        assert_eq!(
            fwhm_curve(&cm, &b, &[0.0, 1e-3], 256).unwrap()[1].1,
            b.tau0()
        );
        assert_eq!(
            double_peak_detect(map.values.row(3).as_slice().unwrap(), &tau).count,
            0
        );
        let si = self_interference(&cm, &b, 1e-3, 1e-3, 0.4, &tau).unwrap();
        assert!(si.iter().all(|v| (v - (1.0 + 0.4f64.cos())).abs() < 1e-10));
        // off the diagonal ρ̃ = Σ_ℓ P_ℓ e^{2πiℓ(τ′−τ)/τ₀}: constant in τ but not 1
        let dz = 0.1e-3;
        let si = self_interference(&cm, &b, 1e-3, 1e-3 - dz, 0.4, &tau).unwrap();
        let delta = dz / b.electron.velocity;
        let cross: Complex64 = (-(cm.l_max() as i64)..=cm.l_max() as i64)
            .map(|l| {
                cm.get(l, l) * Complex64::from_polar(1.0, 2.0 * PI * l as f64 * delta / b.tau0())
            })
            .sum();
        let want = 1.0 + (Complex64::from_polar(1.0, -0.4) * cross).re;
        assert!(si.iter().all(|v| (v - want).abs() < 1e-10));
    }

    #[test]
    fn profile_matches_full_density_diagonal() {
        let b = beam();
        let cm = coherent_cm(25.0, Complex64::new(-0.3, 0.0));
        let tau = period_grid(-0.5 * b.tau0(), b.tau0(), 16);
        let rho = density_matrix(&cm, &b, 1.2e-3, &tau, &tau).unwrap();
        let diag = profile(&cm, &b, 1.2e-3, &tau).unwrap();
        for (j, d) in diag.iter().enumerate() {
            assert!((rho.values[[j, j]].re - d).abs() < 1e-12);
            assert!(rho.values[[j, j]].im.abs() < 1e-12);
        }
        for i in 0..tau.len() {
            for j in 0..tau.len() {
                let h = rho.values[[i, j]] - rho.values[[j, i]].conj();
                assert!(h.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn periodicities() {
        let b = beam();
        let cm = coherent_cm(625.0, Complex64::new(-0.2, 0.0));
        let tau0 = b.tau0();
        let zt = b.z_talbot();
        let tau = period_grid(-0.5 * tau0, tau0, 24);
        let shifted: Vec<f64> = tau.iter().map(|t| t + tau0).collect();
        for &z in &[0.0, 1.5e-3, 0.07] {
            let a = density_matrix(&cm, &b, z, &tau, &tau).unwrap();
            let p = density_matrix(&cm, &b, z + zt, &tau, &tau).unwrap();
            let s = density_matrix(&cm, &b, z, &shifted, &shifted).unwrap();
            for (x, y) in a.values.iter().zip(p.values.iter()) {
                assert!((x - y).norm() < 1e-9);
            }
            for (x, y) in a.values.iter().zip(s.values.iter()) {
                assert!((x - y).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn half_talbot_revival_is_shifted_by_half_period() {
        let b = beam();
        let cm = coherent_cm(625.0, Complex64::new(-0.2, 0.0));
        let tau0 = b.tau0();
        let z = 1.5e-3;
        let tau = period_grid(-0.5 * tau0, tau0, 64);
        let moved: Vec<f64> = tau.iter().map(|t| t + 0.5 * tau0).collect();
        let a = profile(&cm, &b, z, &tau).unwrap();
        let r = profile(&cm, &b, z + 0.5 * b.z_talbot(), &moved).unwrap();
        for (x, y) in a.iter().zip(&r) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn period_mean_is_trace() {
        let b = beam();
        let cm = coherent_cm(100.0, Complex64::new(-0.3, 0.0));
        let tau = period_grid(0.0, b.tau0(), 256);
        let map = profile_map(&cm, &b, &linspace(0.0, 4e-3, 9), &tau).unwrap();
        for row in map.values.rows() {
            let mean = row.sum() / row.len() as f64;
            assert!((mean - 1.0).abs() < 1e-8);
            assert!(row.iter().all(|v| *v >= -1e-9));
        }
    }

    #[test]
    fn coupling_phase_moves_time_origin_only() {
        let a = coherent_cm(49.0, Complex64::new(-0.2, 0.0));
        let r = coherent_cm(49.0, Complex64::from_polar(0.2, 1.1));
        for (x, y) in a.matrix().iter().zip(r.matrix().iter()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn classical_limit_at_plate() {
        let b = beam();
        let cm = coherent_cm(625.0, Complex64::new(-0.2, 0.0));
        let tau = period_grid(-0.5 * b.tau0(), b.tau0(), 128);
        let q = profile(&cm, &b, 0.0, &tau).unwrap();
        let c = classical_profile(5.0, &b, cm.l_max(), 0.0, &tau).unwrap();
        let worst = q
            .iter()
            .zip(&c)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(worst < 2e-2, "{worst}");
    }

    #[test]
    fn self_interference_identity() {
        let b = beam();
        let cm = coherent_cm(64.0, Complex64::new(-0.25, 0.0));
        let tau = period_grid(-0.5 * b.tau0(), b.tau0(), 32);
        let si = self_interference(&cm, &b, 1e-3, 1e-3, 0.0, &tau).unwrap();
        let p = profile(&cm, &b, 1e-3, &tau).unwrap();
        for (x, y) in si.iter().zip(&p) {
            assert!((x - 2.0 * y).abs() < 1e-10);
        }
    }

    #[test]
    fn fwhm_of_known_shapes() {
        let n = 512;
        let period = 1.0;
        let tau = period_grid(-0.5, period, n);
        // triangle of half-base 0.1 on a 0.01 floor: half maximum 0.505 at |τ| = 0.0505
        let tri: Vec<f64> = tau
            .iter()
            .map(|t| (1.0 - t.abs() / 0.1).max(0.0) + 0.01)
            .collect();
        let w = fwhm_periodic(&tri, &tau, period);
        assert!((w - 0.101).abs() < 1e-12, "{w}");
        // peak straddling the period boundary
        let wrapped: Vec<f64> = tau
            .iter()
            .map(|t| {
                let d = 0.5 - t.abs();
                (1.0 - d / 0.1).max(0.0) + 0.01
            })
            .collect();
        assert!((fwhm_periodic(&wrapped, &tau, period) - w).abs() < 1e-2);
        assert_eq!(fwhm_periodic(&vec![2.0; n], &tau, period), period);
    }

    #[test]
    fn peak_detection() {
        let n = 256;
        let tau = period_grid(-0.5, 1.0, n);
        let two: Vec<f64> = tau
            .iter()
            .map(|t| {
                (-((t - 0.1) / 0.02f64).powi(2)).exp()
                    + 0.8 * (-((t + 0.2) / 0.02f64).powi(2)).exp()
            })
            .collect();
        let r = double_peak_detect(&two, &tau);
        assert_eq!(r.count, 2);
        // a plateau of two equal samples counts once
        let mut flat_top = vec![0.0; n];
        flat_top[100] = 1.0;
        flat_top[101] = 1.0;
        assert_eq!(double_peak_detect(&flat_top, &tau).count, 1);
        // maxima at both ends of the period merge
        let mut edges = vec![0.0; n];
        edges[0] = 1.0;
        edges[n - 2] = 0.9;
        edges[n - 1] = 0.5;
        assert_eq!(double_peak_detect(&edges, &tau).count, 1);
    }

    #[test]
    fn rejects_coarse_fwhm_sampling() {
        let b = beam();
        let cm = coherent_cm(9.0, Complex64::new(-0.2, 0.0));
        assert!(fwhm_curve(&cm, &b, &[0.0], 128).is_err());
    }
}
