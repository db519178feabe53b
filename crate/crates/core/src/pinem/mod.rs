//! PINEM scattering: the amplitudes F_ℓ^n and the joint electron–photon
//! state f_ℓ^n produced by one passage through a single-mode near field.
//!
//! F_ℓ^n is the displacement-operator matrix element
//!
//! ```text
//! F_ℓ^n = |β₀|^ℓ e^{−|β₀|²/2} √(n!/(n+ℓ)!) L_n^{(ℓ)}(|β₀|²),   ℓ ≥ 0
//! F_{−ℓ}^{n+ℓ} = (−1)^ℓ F_ℓ^n
//! ```
//!
//! evaluated in log space so photon numbers in the thousands are safe.

pub mod ode;

use std::io::Write;
use std::ops::RangeInclusive;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kinematics::PhotonParams;
use crate::light::PhotonStateAmplitudes;
use crate::numerics::{bessel_j, laguerre_assoc_row_log, log_factorial};

/// Largest n for which [`scattering_amplitude_direct`] is accepted.
pub const DIRECT_SUM_MAX_N: usize = 50;

/// Sideband mass allowed outside the window chosen by [`modulate`].
pub const SIDEBAND_TAIL_TOLERANCE: f64 = 1e-10;

/// Coupling of the electron to the optical mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingCoefficient {
    pub beta0: Complex64,
    /// |β| = √n̄ |β₀|
    pub beta_eff: f64,
    /// arg(−β₀)/ω₀ in seconds
    pub t_p: f64,
}

impl CouplingCoefficient {
    pub fn new(beta0: Complex64, n_mean: f64, photon: &PhotonParams) -> Result<Self> {
        if !beta0.re.is_finite() || !beta0.im.is_finite() {
            return domain("beta0 must be finite");
        }
        if !(n_mean.is_finite() && n_mean >= 0.0) {
            return domain(format!(
                "mean photon number must be finite and >= 0, got {n_mean}"
            ));
        }
        let phase = if beta0.norm() == 0.0 {
            0.0
        } else {
            (-beta0).arg()
        };
        Ok(Self {
            beta0,
            beta_eff: n_mean.sqrt() * beta0.norm(),
            t_p: phase / photon.omega0,
        })
    }

    /// β₀ = −|β₀|, which puts the compression origin at t_p = 0.
    pub fn real_negative(beta0_abs: f64, n_mean: f64, photon: &PhotonParams) -> Result<Self> {
        Self::new(Complex64::new(-beta0_abs, 0.0), n_mean, photon)
    }

    pub fn beta0_abs(&self) -> f64 {
        self.beta0.norm()
    }

    /// arg(−β₀), zero for vanishing coupling.
    pub fn phase(&self) -> f64 {
        if self.beta0.norm() == 0.0 {
            0.0
        } else {
            (-self.beta0).arg()
        }
    }
}

/// F_ℓ^n on ℓ ∈ [−L, L], n ∈ [0, N].
#[derive(Clone, Debug)]
pub struct PinemScatteringTable {
    values: Array2<f64>,
    l_max: usize,
    n_max: usize,
    beta0_abs: f64,
}

impl PinemScatteringTable {
    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn beta0_abs(&self) -> f64 {
        self.beta0_abs
    }

    /// Rows are ℓ + L, columns n.
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// F_ℓ^n, zero outside the table.
    pub fn get(&self, ell: i64, n: i64) -> f64 {
        if ell.unsigned_abs() as usize > self.l_max || n < 0 || n as usize > self.n_max {
            return 0.0;
        }
        self.values[[(ell + self.l_max as i64) as usize, n as usize]]
    }

    /// Largest |Σ_ℓ (F_ℓ^{n−ℓ})² − 1| over n ≤ N − L.
    pub fn sum_rule_residual(&self) -> f64 {
        let l = self.l_max as i64;
        (0..=(self.n_max - self.l_max) as i64)
            .map(|n| {
                let s: f64 = (-l..=l).map(|ell| self.get(ell, n - ell).powi(2)).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Long-format CSV with columns `ell,n,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "ell,n,value")?;
        let l = self.l_max as i64;
        for ell in -l..=l {
            for n in 0..=self.n_max {
                writeln!(w, "{ell},{n},{}", self.get(ell, n as i64))?;
            }
        }
        Ok(())
    }
}

/// Build F_ℓ^n through associated Laguerre polynomials.
pub fn scattering_table(
    beta0_abs: f64,
    l_max: usize,
    n_max: usize,
) -> Result<PinemScatteringTable> {
    if !(beta0_abs.is_finite() && beta0_abs > 0.0) {
        return domain(format!(
            "|beta0| must be positive and finite, got {beta0_abs}"
        ));
    }
    if l_max < 1 {
        return domain("L_max must be at least 1");
    }
    if n_max < l_max {
        return domain(format!("N_max ({n_max}) must be >= L_max ({l_max})"));
    }
    let x = beta0_abs * beta0_abs;
    let log_beta = beta0_abs.ln();

    let rows: Vec<Vec<f64>> = (0..=l_max)
        .into_par_iter()
        .map(|ell| {
            let lag = laguerre_assoc_row_log(n_max, ell, x);
            (0..=n_max)
                .map(|n| {
                    let l = lag[n];
                    if l.sign == 0.0 {
                        return 0.0;
                    }
                    let log_mag = ell as f64 * log_beta - 0.5 * x
                        + 0.5 * (log_factorial(n) - log_factorial(n + ell))
                        + l.log_abs;
                    l.sign * log_mag.exp()
                })
                .collect()
        })
        .collect();

    let mut values = Array2::<f64>::zeros((2 * l_max + 1, n_max + 1));
    for (ell, row) in rows.iter().enumerate() {
        values
            .row_mut(l_max + ell)
            .assign(&ndarray::ArrayView1::from(row));
        if ell == 0 {
            continue;
        }
        let sign = if ell % 2 == 0 { 1.0 } else { -1.0 };
        let mut neg = values.row_mut(l_max - ell);
        for n in ell..=n_max {
            neg[n] = sign * row[n - ell];
        }
    }
    Ok(PinemScatteringTable {
        values,
        l_max,
        n_max,
        beta0_abs,
    })
}

/// F_ℓ^n from its defining alternating sum; accurate only for small n.
pub fn scattering_amplitude_direct(beta0_abs: f64, ell: i64, n: usize) -> Result<f64> {
    if n > DIRECT_SUM_MAX_N {
        return domain(format!(
            "direct sum is limited to n <= {DIRECT_SUM_MAX_N} (cancellation), got {n}"
        ));
    }
    let n_i = n as i64;
    if n_i + ell < 0 {
        return Ok(0.0);
    }
    let x = beta0_abs * beta0_abs;
    let start = (-ell).max(0);
    let mut sum = 0.0;
    for k in start..=n_i {
        let denom = log_factorial(k as usize)
            + log_factorial((ell + k) as usize)
            + log_factorial((n_i - k) as usize);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * x.powi(k as i32) * (-denom).exp();
    }
    let prefactor = beta0_abs.powi(ell as i32)
        * (-0.5 * x).exp()
        * (0.5 * (log_factorial((n_i + ell) as usize) + log_factorial(n))).exp();
    Ok(prefactor * sum)
}

/// max over ℓ of |F_ℓ^n − J_ℓ(2√n |β₀|)|.
pub fn bessel_limit_error(
    table: &PinemScatteringTable,
    n: usize,
    ell_range: RangeInclusive<i64>,
) -> Result<f64> {
    if n > table.n_max() {
        return Err(Error::Dimension {
            what: "bessel limit photon number",
            required: n,
            available: table.n_max(),
        });
    }
    if ell_range
        .start()
        .unsigned_abs()
        .max(ell_range.end().unsigned_abs()) as usize
        > table.l_max()
    {
        return domain("sideband range exceeds the table");
    }
    let arg = 2.0 * (n as f64).sqrt() * table.beta0_abs();
    Ok(ell_range
        .map(|ell| (table.get(ell, n as i64) - bessel_j(ell, arg)).abs())
        .fold(0.0, f64::max))
}

/// Default sideband half-width ⌈2|β|⌉ + 15.
pub fn default_sideband_cutoff(beta_eff: f64) -> usize {
    (2.0 * beta_eff).ceil() as usize + 15
}

/// Joint amplitudes f_ℓ^n, ℓ ∈ [−L, L], n ∈ [0, cutoff + L].
#[derive(Clone, Debug)]
pub struct ModulatedElectronState {
    f: Array2<Complex64>,
    l_max: usize,
    source_state: PhotonStateAmplitudes,
    coupling: CouplingCoefficient,
}

impl ModulatedElectronState {
    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn n_max(&self) -> usize {
        self.f.ncols() - 1
    }

    /// Rows are ℓ + L, columns n.
    pub fn amplitudes(&self) -> &Array2<Complex64> {
        &self.f
    }

    pub fn source_state(&self) -> &PhotonStateAmplitudes {
        &self.source_state
    }

    pub fn coupling(&self) -> &CouplingCoefficient {
        &self.coupling
    }

    /// f_ℓ^n, zero outside the window.
    pub fn get(&self, ell: i64, n: i64) -> Complex64 {
        if ell.unsigned_abs() as usize > self.l_max || n < 0 || n as usize > self.n_max() {
            return Complex64::new(0.0, 0.0);
        }
        self.f[[(ell + self.l_max as i64) as usize, n as usize]]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.f.iter().map(|v| v.norm_sqr()).sum()
    }

    /// |Σ|f_ℓ^n|² − 1|
    pub fn unitarity_residual(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }

    /// Electron sideband populations P_ℓ = Σ_n |f_ℓ^n|², ℓ = −L..=L.
    pub fn sideband_populations(&self) -> Vec<f64> {
        self.f
            .axis_iter(Axis(0))
            .map(|row| row.iter().map(|v| v.norm_sqr()).sum())
            .collect()
    }

    /// K_{ℓℓ′} = Σ_n f_ℓ^n f_{ℓ′}^{n*}. For a mixture the Fock components
    /// are summed incoherently, which leaves only the diagonal.
    pub fn pair_kernel(&self) -> Array2<Complex64> {
        let dim = 2 * self.l_max + 1;
        let mixture = self.source_state.is_mixture();
        let rows: Vec<Vec<Complex64>> = (0..dim)
            .into_par_iter()
            .map(|i| {
                let fi = self.f.row(i);
                (0..dim)
                    .map(|j| {
                        if mixture && i != j {
                            return Complex64::new(0.0, 0.0);
                        }
                        fi.iter()
                            .zip(self.f.row(j).iter())
                            .map(|(a, b)| a * b.conj())
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let mut k = Array2::zeros((dim, dim));
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                k[[i, j]] = v;
            }
        }
        k
    }
}

/// f_ℓ^n = e^{iℓ arg(−β₀)} α_{n+ℓ} F_ℓ^n.
pub fn modulated_state(
    state: &PhotonStateAmplitudes,
    coupling: &CouplingCoefficient,
    table: &PinemScatteringTable,
) -> Result<ModulatedElectronState> {
    if (coupling.beta0_abs() - table.beta0_abs()).abs() > 1e-12 * table.beta0_abs() {
        return domain(format!(
            "table built for |beta0| = {} but coupling has {}",
            table.beta0_abs(),
            coupling.beta0_abs()
        ));
    }
    let l_max = table.l_max();
    let n_max = state.cutoff() + l_max;
    if table.n_max() < n_max {
        return Err(Error::Dimension {
            what: "scattering table photon window",
            required: n_max,
            available: table.n_max(),
        });
    }
    let phase = coupling.phase();
    let l = l_max as i64;
    let mut f = Array2::<Complex64>::zeros((2 * l_max + 1, n_max + 1));
    for ell in -l..=l {
        let rot = Complex64::from_polar(1.0, ell as f64 * phase);
        let mut row = f.row_mut((ell + l) as usize);
        for n in 0..=n_max as i64 {
            let a = state.amplitude(n + ell);
            if a.norm_sqr() == 0.0 {
                continue;
            }
            row[n as usize] = rot * a * table.get(ell, n);
        }
    }
    Ok(ModulatedElectronState {
        f,
        l_max,
        source_state: state.clone(),
        coupling: *coupling,
    })
}

/// Table and modulated state with the sideband window grown from the default
/// in steps of 5 until the dropped probability is below `tail_tolerance`.
pub fn modulate(
    state: &PhotonStateAmplitudes,
    coupling: &CouplingCoefficient,
    tail_tolerance: f64,
) -> Result<(PinemScatteringTable, ModulatedElectronState)> {
    let mut l_max = default_sideband_cutoff(coupling.beta_eff);
    let limit = l_max + 200;
    loop {
        let table = scattering_table(coupling.beta0_abs(), l_max, state.cutoff() + l_max)?;
        let m = modulated_state(state, coupling, &table)?;
        let dropped = 1.0 - m.norm_sqr() / state.norm_sqr();
        if dropped < tail_tolerance {
            return Ok((table, m));
        }
        if l_max >= limit {
            return Err(Error::Contract {
                what: "sideband tail",
                residual: dropped,
                tolerance: tail_tolerance,
            });
        }
        l_max += 5;
    }
}

/// Result of integrating the z-resolved coupling equations.
#[derive(Clone, Copy, Debug)]
pub struct OdeCheck {
    /// max |f_numeric − f_closed_form|
    pub residual: f64,
    /// Largest amplitude off the ladders n + ℓ populated initially.
    pub off_ladder_max: f64,
    pub steps: usize,
}

/// Integrate ∂_z f_ℓ^n = √n u* f_{ℓ+1}^{n−1} − √(n+1) u f_{ℓ−1}^{n+1} with
/// u(z) = β₀ g(z), g a unit-area Gaussian, and compare to the closed form.
pub fn evolution_ode_check(
    beta0: Complex64,
    state: &PhotonStateAmplitudes,
    l_max: usize,
    tol: ode::Tolerances,
) -> Result<OdeCheck> {
    if l_max < 1 {
        return domain("L_max must be at least 1");
    }
    let lw = l_max as i64;
    let n_max = state.cutoff() + l_max;
    let cols = n_max + 1;
    let dim = 2 * l_max + 1;
    let idx = |ell: i64, n: usize| (ell + lw) as usize * cols + n;

    let mut y = vec![Complex64::new(0.0, 0.0); dim * cols];
    for n in 0..=state.cutoff() {
        y[idx(0, n)] = state.amplitude(n as i64);
    }

    let sigma = 1.0;
    let half_width = 10.0 * sigma;
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * sigma);
    let sqrt_n: Vec<f64> = (0..=cols).map(|n| (n as f64).sqrt()).collect();
    let rhs = |z: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let u = beta0 * (norm * (-0.5 * (z / sigma).powi(2)).exp());
        let uc = u.conj();
        for ell in -lw..=lw {
            for n in 0..cols {
                let mut acc = Complex64::new(0.0, 0.0);
                if n > 0 && ell < lw {
                    acc += sqrt_n[n] * uc * y[idx(ell + 1, n - 1)];
                }
                if n + 1 < cols && ell > -lw {
                    acc -= sqrt_n[n + 1] * u * y[idx(ell - 1, n + 1)];
                }
                dy[idx(ell, n)] = acc;
            }
        }
    };
    let stats = ode::integrate(rhs, -half_width, half_width, &mut y, tol)?;

    let reference = |ell: i64, n: usize| -> Complex64 {
        if ell == 0 {
            state.amplitude(n as i64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let closed = if beta0.norm() == 0.0 {
        None
    } else {
        let photon_free = CouplingCoefficient {
            beta0,
            beta_eff: 0.0,
            t_p: 0.0,
        };
        let table = scattering_table(beta0.norm(), l_max, n_max)?;
        Some(modulated_state(state, &photon_free, &table)?)
    };

    let mut residual = 0.0f64;
    let mut off_ladder = 0.0f64;
    for ell in -lw..=lw {
        for n in 0..cols {
            let got = y[idx(ell, n)];
            let want = match &closed {
                Some(m) => m.get(ell, n as i64),
                None => reference(ell, n),
            };
            residual = residual.max((got - want).norm());
            if state.amplitude(n as i64 + ell).norm_sqr() == 0.0 {
                off_ladder = off_ladder.max(got.norm());
            }
        }
    }
    Ok(OdeCheck {
        residual,
        off_ladder_max: off_ladder,
        steps: stats.accepted,
    })
}
