//! A second, single-mode bosonic sample placed a distance d after the PINEM
//! region, initially in its ground state and resonant with the m-th harmonic
//! of the PINEM light.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kinematics::{PhotonParams, PropagationConstants};
use crate::numerics::log_factorial;
use crate::pinem::ModulatedElectronState;

/// Poisson mass allowed above the sample cutoff.
pub const SAMPLE_TAIL_TOLERANCE: f64 = 1e-12;

/// Smallest sample Fock cutoff ever used.
pub const MIN_SAMPLE_CUTOFF: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleMode {
    /// ω₀′ = m ω₀
    pub harmonic_m: u32,
    pub beta0_sample: Complex64,
    pub n_prime_max: usize,
}

impl SampleMode {
    /// `frequency_ratio` is ω₀′/ω₀ and must be a positive integer.
    pub fn new(frequency_ratio: f64, beta0_sample: Complex64) -> Result<Self> {
        let m = frequency_ratio.round();
        if !frequency_ratio.is_finite() || (frequency_ratio - m).abs() > 1e-9 || m < 1.0 {
            return Err(Error::Unsupported(format!(
                "sample/PINEM frequency ratio must be a positive integer, got {frequency_ratio}"
            )));
        }
        let b = beta0_sample.norm();
        if !(b.is_finite() && b > 0.0) {
            return domain(format!(
                "sample coupling must be nonzero and finite, got {beta0_sample}"
            ));
        }
        Ok(Self {
            harmonic_m: m as u32,
            beta0_sample,
            n_prime_max: poisson_cutoff(b * b, SAMPLE_TAIL_TOLERANCE).max(MIN_SAMPLE_CUTOFF),
        })
    }

    pub fn with_cutoff(self, n_prime_max: usize) -> Self {
        Self {
            n_prime_max,
            ..self
        }
    }
}

/// Smallest N with Σ_{n>N} Poisson(n; μ) ≤ tol.
fn poisson_cutoff(mean: f64, tol: f64) -> usize {
    let mut mass = 0.0;
    let mut n = 0usize;
    loop {
        mass += poisson(mean, n);
        if 1.0 - mass <= tol || n > 100_000 {
            return n;
        }
        n += 1;
    }
}

fn poisson(mean: f64, n: usize) -> f64 {
    if mean == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (n as f64 * mean.ln() - mean - log_factorial(n)).exp()
}

/// K_{ℓ₁ℓ₂} = Σ_n f_ℓ₁^n f_ℓ₂^{n*}, shared by every sample observable.
#[derive(Clone, Debug)]
pub struct PairKernel {
    k: Array2<Complex64>,
    l_max: usize,
}

impl PairKernel {
    pub fn new(m_state: &ModulatedElectronState) -> Self {
        Self {
            k: m_state.pair_kernel(),
            l_max: m_state.l_max(),
        }
    }

    pub fn get(&self, l1: i64, l2: i64) -> Complex64 {
        let l = self.l_max as i64;
        if l1.abs() > l || l2.abs() > l {
            return Complex64::new(0.0, 0.0);
        }
        self.k[[(l1 + l) as usize, (l2 + l) as usize]]
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }
}

#[derive(Clone, Debug)]
pub struct SampleDensityMatrix {
    pub rho: Array2<Complex64>,
    pub distance_d: f64,
}

impl SampleDensityMatrix {
    pub fn trace(&self) -> Complex64 {
        self.rho.diag().iter().sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.rho.diag().iter().map(|v| v.re).collect()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.rho.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.rho[[i, j]] - self.rho[[j, i]].conj()).norm());
            }
        }
        worst
    }
}

/// ρ_{n₁n₂} = e^{−|β₀′|²} [(−β₀′)^{n₁}]* (−β₀′)^{n₂} / √(n₁!n₂!)
///            × Σ_{ℓ₁−ℓ₂ = m(n₁−n₂)} e^{2πi(ℓ₂²−ℓ₁²)d/z_T} K_{ℓ₁ℓ₂}
pub fn sample_density_matrix(
    m_state: &ModulatedElectronState,
    mode: &SampleMode,
    d: f64,
    consts: &PropagationConstants,
) -> SampleDensityMatrix {
    sample_density_matrix_from_kernel(&PairKernel::new(m_state), mode, d, consts)
}

pub fn sample_density_matrix_from_kernel(
    kernel: &PairKernel,
    mode: &SampleMode,
    d: f64,
    consts: &PropagationConstants,
) -> SampleDensityMatrix {
    let nmax = mode.n_prime_max;
    let m = mode.harmonic_m as i64;
    let l = kernel.l_max() as i64;
    let b = -mode.beta0_sample;
    let log_b = b.norm().ln();
    let arg_b = b.arg();
    let x = b.norm_sqr();
    let amp = |n: usize| -> Complex64 {
        // (−β₀′)^n e^{−|β₀′|²/2} / √n!
        Complex64::from_polar(
            (n as f64 * log_b - 0.5 * x - 0.5 * log_factorial(n)).exp(),
            n as f64 * arg_b,
        )
    };
    let phase = |l1: i64, l2: i64| -> Complex64 {
        let q = ((l2 * l2 - l1 * l1) as f64) * (d / consts.z_talbot);
        Complex64::from_polar(1.0, 2.0 * PI * q)
    };
    // the ℓ sum depends only on Δn = n₁ − n₂
    let sums: Vec<Complex64> = (-(nmax as i64)..=nmax as i64)
        .map(|dn| {
            let shift = m * dn;
            let mut acc = Complex64::new(0.0, 0.0);
            for l1 in -l..=l {
                let l2 = l1 - shift;
                if l2.abs() > l {
                    continue;
                }
                acc += phase(l1, l2) * kernel.get(l1, l2);
            }
            acc
        })
        .collect();
    let mut rho = Array2::zeros((nmax + 1, nmax + 1));
    for n1 in 0..=nmax {
        for n2 in 0..=nmax {
            let dn = n1 as i64 - n2 as i64;
            rho[[n1, n2]] = amp(n1).conj() * amp(n2) * sums[(dn + nmax as i64) as usize];
        }
    }
    SampleDensityMatrix { rho, distance_d: d }
}

/// Δ_m = e^{2πim²d/z_T} Σ_ℓ e^{4πiℓmd/z_T} K_{ℓ,ℓ+m}
pub fn delta_m(
    m_state: &ModulatedElectronState,
    m: u32,
    d: f64,
    consts: &PropagationConstants,
) -> Complex64 {
    delta_m_from_kernel(&PairKernel::new(m_state), m, d, consts)
}

pub fn delta_m_from_kernel(
    kernel: &PairKernel,
    m: u32,
    d: f64,
    consts: &PropagationConstants,
) -> Complex64 {
    let m = m as i64;
    let l = kernel.l_max() as i64;
    let q = d / consts.z_talbot;
    let mut acc = Complex64::new(0.0, 0.0);
    for ell in -l..=(l - m) {
        let ph = 2.0 * PI * ((2 * ell * m + m * m) as f64 * q);
        acc += Complex64::from_polar(1.0, ph) * kernel.get(ell, ell + m);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaSample {
    pub d: f64,
    pub m: u32,
    pub delta: Complex64,
}

/// Δ_m(d) for every (d, m), ordered by d then by the order of `m_list`.
pub fn delta_m_sweep(
    m_state: &ModulatedElectronState,
    m_list: &[u32],
    d_grid: &[f64],
    consts: &PropagationConstants,
) -> Vec<DeltaSample> {
    let kernel = PairKernel::new(m_state);
    d_grid
        .par_iter()
        .flat_map_iter(|&d| {
            let kernel = &kernel;
            m_list.iter().map(move |&m| DeltaSample {
                d,
                m,
                delta: delta_m_from_kernel(kernel, m, d, consts),
            })
        })
        .collect()
}

/// ⟨a′† + a′⟩(t) = 2 Re{−β₀′ Δ_m e^{iω₀′t}}
pub fn polarization_expectation(
    mode: &SampleMode,
    delta: Complex64,
    photon: &PhotonParams,
    t_grid: &[f64],
) -> Vec<f64> {
    let w = mode.harmonic_m as f64 * photon.omega0;
    t_grid
        .iter()
        .map(|&t| 2.0 * (-mode.beta0_sample * delta * Complex64::from_polar(1.0, w * t)).re)
        .collect()
}
