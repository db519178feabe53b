//! Truncated photon-number amplitudes α_n for the optical states that drive
//! the PINEM interaction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::{
    airy_ai, hermite_sequence_log_scaled, log_factorial, AIRY_AI_FIRST_ZERO,
    AIRY_AI_PRIME_AT_FIRST_ZERO,
};

pub const DEFAULT_TAIL_EPSILON: f64 = 1e-10;

/// The asymptotic Airy profile is only meaningful well above a few photons.
pub const MPU_MIN_MEAN: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateFamily {
    Coherent,
    Squeezed,
    Mpu,
    Fock,
    Custom,
}

/// Family parameters as supplied to the constructor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase")]
pub enum LightParams {
    Coherent {
        n_mean: f64,
    },
    /// D(g) S(ζ)|0⟩ with ζ = s e^{iθ}.
    Squeezed {
        g: Complex64,
        s: f64,
        theta: f64,
    },
    Mpu {
        n_mean: f64,
    },
    Fock {
        n0: usize,
    },
    Custom,
}

impl LightParams {
    pub fn family(&self) -> StateFamily {
        match self {
            LightParams::Coherent { .. } => StateFamily::Coherent,
            LightParams::Squeezed { .. } => StateFamily::Squeezed,
            LightParams::Mpu { .. } => StateFamily::Mpu,
            LightParams::Fock { .. } => StateFamily::Fock,
            LightParams::Custom => StateFamily::Custom,
        }
    }
}

/// Normalized amplitudes α_n, n = 0..=cutoff.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonStateAmplitudes {
    #[serde(flatten)]
    params: LightParams,
    cutoff: usize,
    n_mean: f64,
    /// Diagonal-only statistics: downstream code sums Fock contributions
    /// incoherently instead of building coherences.
    is_mixture: bool,
    amplitudes: Vec<Complex64>,
}

impl PhotonStateAmplitudes {
    fn build(params: LightParams, n_mean: f64, amplitudes: Vec<Complex64>) -> Self {
        Self {
            params,
            cutoff: amplitudes.len() - 1,
            n_mean,
            is_mixture: false,
            amplitudes,
        }
    }

    /// Wrap user amplitudes; they are normalized here.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return domain("custom state needs at least one amplitude");
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm.is_finite() && norm > 0.0) {
            return domain("custom state amplitudes have zero or non-finite norm");
        }
        let scale = norm.sqrt().recip();
        let amplitudes: Vec<Complex64> = amplitudes.into_iter().map(|a| a * scale).collect();
        let n_mean = amplitudes
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum();
        Ok(Self::build(LightParams::Custom, n_mean, amplitudes))
    }

    /// The same populations, read as an incoherent mixture.
    pub fn into_mixture(mut self) -> Self {
        self.is_mixture = true;
        self
    }

    /// Multiply every amplitude by e^{iφ}.
    pub fn with_global_phase(mut self, phase: f64) -> Self {
        let u = Complex64::from_polar(1.0, phase);
        for a in &mut self.amplitudes {
            *a *= u;
        }
        self
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// α_n, zero outside the stored window.
    pub fn amplitude(&self, n: i64) -> Complex64 {
        if n < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitudes
            .get(n as usize)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn params(&self) -> &LightParams {
        &self.params
    }

    pub fn family(&self) -> StateFamily {
        self.params.family()
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Nominal mean photon number n̄ of the family.
    pub fn n_mean(&self) -> f64 {
        self.n_mean
    }

    pub fn is_mixture(&self) -> bool {
        self.is_mixture
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let mut state: Self = serde_json::from_str(s)?;
        if state.amplitudes.is_empty() || state.cutoff + 1 != state.amplitudes.len() {
            return Err(Error::Domain(format!(
                "state document cutoff {} does not match {} amplitudes",
                state.cutoff,
                state.amplitudes.len()
            )));
        }
        state.cutoff = state.amplitudes.len() - 1;
        Ok(state)
    }
}

/// Mean and variance of the photon-number distribution |α_n|².
pub fn state_moments(state: &PhotonStateAmplitudes) -> (f64, f64) {
    let p = state.probabilities();
    let total: f64 = p.iter().sum();
    let mean = p.iter().enumerate().map(|(n, w)| n as f64 * w).sum::<f64>() / total;
    let var = p
        .iter()
        .enumerate()
        .map(|(n, w)| {
            let d = n as f64 - mean;
            d * d * w
        })
        .sum::<f64>()
        / total;
    (mean, var)
}

fn check_tail_epsilon(tail_epsilon: f64) -> Result<()> {
    if !(tail_epsilon > 0.0 && tail_epsilon <= 1e-6) {
        return domain(format!(
            "tail_epsilon must lie in (0, 1e-6], got {tail_epsilon}"
        ));
    }
    Ok(())
}

/// Smallest cutoff whose discarded upper tail carries at most `tail_epsilon`
/// of the mass, then renormalize.
fn truncate_and_normalize(mut amps: Vec<Complex64>, tail_epsilon: f64) -> Vec<Complex64> {
    let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let mut tail = 0.0;
    let mut keep = amps.len();
    for (n, a) in amps.iter().enumerate().rev() {
        let next = tail + a.norm_sqr();
        if next > tail_epsilon * total {
            keep = n + 1;
            break;
        }
        tail = next;
    }
    amps.truncate(keep.max(1));
    let scale = amps
        .iter()
        .map(|a| a.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .recip();
    for a in &mut amps {
        *a *= scale;
    }
    amps
}

/// Generate amplitudes on [0, n_hi], widening the window until the
/// generated mass misses at most `tail_epsilon / 2` of the exact unit norm.
fn generate_until_normalized(
    mut n_hi: usize,
    tail_epsilon: f64,
    generate: impl Fn(usize) -> Vec<Complex64>,
) -> Result<Vec<Complex64>> {
    for _ in 0..40 {
        let amps = generate(n_hi);
        let mass: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !mass.is_finite() {
            return Err(Error::Domain("non-finite photon amplitudes".into()));
        }
        if 1.0 - mass <= 0.5 * tail_epsilon {
            return Ok(amps);
        }
        n_hi = n_hi + n_hi / 2 + 16;
    }
    Err(Error::Domain(
        "photon-number window did not converge to unit norm".into(),
    ))
}

pub fn coherent_state(n_mean: f64, tail_epsilon: f64) -> Result<PhotonStateAmplitudes> {
    if !(n_mean.is_finite() && n_mean > 0.0) {
        return domain(format!("coherent state needs n_mean > 0, got {n_mean}"));
    }
    check_tail_epsilon(tail_epsilon)?;
    let ln_mean = n_mean.ln();
    let n_hi = (n_mean + 12.0 * n_mean.sqrt() + 30.0).ceil() as usize;
    let amps = generate_until_normalized(n_hi, tail_epsilon, |n_hi| {
        (0..=n_hi)
            .map(|n| {
                let log_p = -n_mean + n as f64 * ln_mean - log_factorial(n);
                Complex64::new((0.5 * log_p).exp(), 0.0)
            })
            .collect()
    })?;
    let amps = truncate_and_normalize(amps, tail_epsilon);
    Ok(PhotonStateAmplitudes::build(
        LightParams::Coherent { n_mean },
        n_mean,
        amps,
    ))
}

/// Amplitudes of the coherent squeezed state D(g)S(ζ)|0⟩, ζ = s e^{iθ}.
///
/// With ξ = e^{iθ} tanh s and r = √ξ,
/// α_n = (r/√2)ⁿ / √(n! cosh s) · exp(−(|g|² + g*²ξ)/2) · H_n((g + g*ξ)/(√2 r)).
/// Any branch of r gives the same product because H_n(−x) = (−1)ⁿ H_n(x).
pub fn squeezed_coherent_state(
    g: Complex64,
    s: f64,
    theta: f64,
    tail_epsilon: f64,
) -> Result<PhotonStateAmplitudes> {
    if !(s.is_finite() && s >= 0.0) {
        return domain(format!("squeezing parameter s must be >= 0, got {s}"));
    }
    if !g.re.is_finite() || !g.im.is_finite() || !theta.is_finite() {
        return domain("squeezed state parameters must be finite");
    }
    check_tail_epsilon(tail_epsilon)?;
    let g_sq = g.norm_sqr();
    let sinh_s = s.sinh();
    let n_mean = g_sq + sinh_s * sinh_s;
    let phi = g.arg() - 0.5 * theta;
    let var = g_sq * ((2.0 * s).cosh() - (2.0 * s).sinh() * (2.0 * phi).cos())
        + 2.0 * sinh_s * sinh_s * s.cosh() * s.cosh();
    let n_hi = (n_mean + 14.0 * var.sqrt() + 50.0).ceil() as usize;

    let amps =
        generate_until_normalized(n_hi, tail_epsilon, |n_hi| squeezed_raw(g, s, theta, n_hi))?;
    let amps = truncate_and_normalize(amps, tail_epsilon);
    Ok(PhotonStateAmplitudes::build(
        LightParams::Squeezed { g, s, theta },
        n_mean,
        amps,
    ))
}

/// Unnormalized squeezed amplitudes on [0, n_hi].
fn squeezed_raw(g: Complex64, s: f64, theta: f64, n_hi: usize) -> Vec<Complex64> {
    let g_sq = g.norm_sqr();
    if s == 0.0 {
        // removable singularity of the ξ-form: plain coherent amplitudes
        return (0..=n_hi)
            .map(|n| {
                if g_sq == 0.0 {
                    return Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0);
                }
                let log_mag = -0.5 * g_sq + n as f64 * g.norm().ln() - 0.5 * log_factorial(n);
                Complex64::from_polar(log_mag.exp(), n as f64 * g.arg())
            })
            .collect();
    }
    let xi = Complex64::from_polar(s.tanh(), theta);
    let root = xi.sqrt();
    let step = root / std::f64::consts::SQRT_2;
    let (ln_step, arg_step) = (step.norm().ln(), step.arg());
    let arg = (g + g.conj() * xi) / (std::f64::consts::SQRT_2 * root);
    let common = -0.5 * (g_sq + g.conj() * g.conj() * xi);
    let ln_cosh = s.cosh().ln();
    hermite_sequence_log_scaled(n_hi, arg)
        .into_iter()
        .enumerate()
        .map(|(n, h)| {
            if h.is_zero() {
                return Complex64::new(0.0, 0.0);
            }
            let nf = n as f64;
            let log_mag =
                nf * ln_step - 0.5 * (log_factorial(n) + ln_cosh) + common.re + h.log_magnitude;
            let phase = nf * arg_step + common.im + h.phase;
            Complex64::from_polar(log_mag.exp(), phase)
        })
        .collect()
}

/// Squeezed state at fixed mean photon number, with θ = 0 and
/// φ = arg g − θ/2 = `phi`.
///
/// The number variance depends on φ only through cos 2φ: φ = 0 is amplitude
/// squeezing (minimum variance) and φ = π/2 is phase squeezing (maximum).
pub fn squeezed_with_mean(
    n_mean: f64,
    s: f64,
    phi: f64,
    tail_epsilon: f64,
) -> Result<PhotonStateAmplitudes> {
    let sinh_s = s.sinh();
    let g_sq = n_mean - sinh_s * sinh_s;
    if g_sq.is_nan() || g_sq < 0.0 {
        return domain(format!(
            "n_mean = {n_mean} is below the squeezed-vacuum population sinh²s = {}",
            sinh_s * sinh_s
        ));
    }
    squeezed_coherent_state(
        Complex64::from_polar(g_sq.sqrt(), phi),
        s,
        0.0,
        tail_epsilon,
    )
}

/// C = √(2|s₁|/3) / Ai′(s₁), the value that normalizes the continuum limit
/// of the Airy profile.
pub fn mpu_normalization_constant() -> f64 {
    (2.0 * AIRY_AI_FIRST_ZERO.abs() / 3.0).sqrt() / AIRY_AI_PRIME_AT_FIRST_ZERO
}

/// Minimum-phase-uncertainty state, α_n ≈ (C/√n̄) Ai[s₁(1 − 2n/3n̄)].
pub fn mpu_state(n_mean: f64, tail_epsilon: f64) -> Result<PhotonStateAmplitudes> {
    if !(n_mean.is_finite() && n_mean >= MPU_MIN_MEAN) {
        return domain(format!(
            "MPU profile is asymptotic and needs n_mean >= {MPU_MIN_MEAN}, got {n_mean}"
        ));
    }
    check_tail_epsilon(tail_epsilon)?;
    let prefactor = mpu_normalization_constant() / n_mean.sqrt();
    let mut amps = Vec::new();
    let mut n = 0usize;
    loop {
        let y = AIRY_AI_FIRST_ZERO * (1.0 - 2.0 * n as f64 / (3.0 * n_mean));
        let a = prefactor * airy_ai(y);
        amps.push(Complex64::new(a, 0.0));
        // past the turning point the profile decays super-exponentially
        if y > 1.0 && a * a * n_mean < 1e-6 * tail_epsilon {
            break;
        }
        n += 1;
    }
    let amps = truncate_and_normalize(amps, tail_epsilon);
    Ok(PhotonStateAmplitudes::build(
        LightParams::Mpu { n_mean },
        n_mean,
        amps,
    ))
}

pub fn fock_state(n0: usize) -> PhotonStateAmplitudes {
    let mut amps = vec![Complex64::new(0.0, 0.0); n0 + 1];
    amps[n0] = Complex64::new(1.0, 0.0);
    PhotonStateAmplitudes::build(LightParams::Fock { n0 }, n0 as f64, amps)
}
