use std::f64::consts::{FRAC_PI_2, PI};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qpinem::kinematics::DispersionMode;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SQUEEZING: f64 = 2.0;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub electron: ElectronConfig,
    pub photon: PhotonConfig,
    pub coupling: CouplingConfig,
    pub light: Vec<LightEntry>,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub mode: DispersionMode,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fwhm: Option<FwhmConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dmatrix: Option<DmatrixConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interfere: Option<InterfereConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<DeltaConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectronConfig {
    pub kinetic_energy_ev: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotonConfig {
    pub energy_ev: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    pub beta0_abs: f64,
    /// arg β₀ in radians; π puts the compression origin at t_p = 0.
    #[serde(default = "default_beta0_arg")]
    pub beta0_arg: f64,
}

fn default_beta0_arg() -> f64 {
    PI
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LightEntry {
    pub label: String,
    pub state: LightSpec,
    /// Drop photon coherences and sum Fock components incoherently.
    #[serde(default)]
    pub mixture: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    Amplitude,
    Phase,
}

impl Quadrature {
    pub fn phi(self) -> f64 {
        match self {
            Quadrature::Amplitude => 0.0,
            Quadrature::Phase => FRAC_PI_2,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum LightSpec {
    Coherent {
        n_mean: f64,
    },
    /// Squeezed coherent state with prescribed mean; exactly one of
    /// `quadrature` and `phi` selects the squeezing direction.
    Squeezed {
        n_mean: f64,
        #[serde(default = "default_squeezing")]
        s: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quadrature: Option<Quadrature>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi: Option<f64>,
    },
    /// Squeezed coherent state from its raw parameters.
    SqueezedCoherent {
        g: [f64; 2],
        s: f64,
        #[serde(default)]
        theta: f64,
    },
    Mpu {
        n_mean: f64,
    },
    Fock {
        n0: usize,
    },
}

fn default_squeezing() -> f64 {
    DEFAULT_SQUEEZING
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LengthUnit {
    #[default]
    M,
    Mm,
    ZTalbot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TimeUnit {
    S,
    Fs,
    #[default]
    Tau0,
}

/// `samples` points from `start` to `stop` inclusive.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LengthAxis {
    pub start: f64,
    pub stop: f64,
    pub samples: usize,
    #[serde(default)]
    pub unit: LengthUnit,
}

/// `samples` points from `start` towards `stop`, `stop` excluded, so a span
/// of one period samples it without duplication.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeAxis {
    pub start: f64,
    pub stop: f64,
    pub samples: usize,
    #[serde(default)]
    pub unit: TimeUnit,
}

impl Default for TimeAxis {
    fn default() -> Self {
        Self {
            start: -0.5,
            stop: 0.5,
            samples: 512,
            unit: TimeUnit::Tau0,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<LengthAxis>,
    #[serde(default)]
    pub tau: TimeAxis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_prime: Option<TimeAxis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<LengthAxis>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tail_epsilon")]
    pub tail_epsilon: f64,
    #[serde(default = "default_sideband_tail")]
    pub sideband_tail: f64,
    #[serde(default = "default_unitarity")]
    pub unitarity: f64,
}

fn default_tail_epsilon() -> f64 {
    qpinem::light::DEFAULT_TAIL_EPSILON
}

fn default_sideband_tail() -> f64 {
    qpinem::pinem::SIDEBAND_TAIL_TOLERANCE
}

fn default_unitarity() -> f64 {
    1e-8
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tail_epsilon: default_tail_epsilon(),
            sideband_tail: default_sideband_tail(),
            unitarity: default_unitarity(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FwhmConfig {
    #[serde(default = "default_samples_per_period")]
    pub samples_per_period: usize,
}

fn default_samples_per_period() -> usize {
    512
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmatrixConfig {
    pub z: f64,
    #[serde(default)]
    pub unit: LengthUnit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfereConfig {
    pub z: f64,
    pub z_prime: f64,
    #[serde(default)]
    pub unit: LengthUnit,
    /// Relative phases φ in radians, one output column each.
    pub phi: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaConfig {
    /// Sample harmonics m = ω₀′/ω₀.
    pub m: Vec<f64>,
    pub beta0_sample_abs: f64,
    #[serde(default)]
    pub beta0_sample_arg: f64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config(format!("at `{path}`: {}", e.into_inner()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        positive(
            "electron.kinetic_energy_ev",
            self.electron.kinetic_energy_ev,
        )?;
        positive("photon.energy_ev", self.photon.energy_ev)?;
        positive("coupling.beta0_abs", self.coupling.beta0_abs)?;
        finite("coupling.beta0_arg", self.coupling.beta0_arg)?;
        if self.light.is_empty() {
            return Err(CliError::Config(
                "`light`: at least one entry is required".into(),
            ));
        }
        let mut labels = std::collections::BTreeSet::new();
        for (i, entry) in self.light.iter().enumerate() {
            let key = format!("light[{i}]");
            let valid_label = !entry.label.is_empty()
                && entry
                    .label
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
            if !valid_label {
                return Err(CliError::Config(format!(
                    "`{key}.label`: must be non-empty ASCII letters, digits, '_' or '-'"
                )));
            }
            if !labels.insert(entry.label.as_str()) {
                return Err(CliError::Config(format!(
                    "`{key}.label`: duplicate label {:?}",
                    entry.label
                )));
            }
            match &entry.state {
                LightSpec::Coherent { n_mean } | LightSpec::Mpu { n_mean } => {
                    positive(&format!("{key}.state.n_mean"), *n_mean)?
                }
                LightSpec::Squeezed {
                    n_mean,
                    s,
                    quadrature,
                    phi,
                } => {
                    positive(&format!("{key}.state.n_mean"), *n_mean)?;
                    non_negative(&format!("{key}.state.s"), *s)?;
                    match (quadrature, phi) {
                        (Some(_), None) => {}
                        (None, Some(p)) => finite(&format!("{key}.state.phi"), *p)?,
                        _ => {
                            return Err(CliError::Config(format!(
                                "`{key}.state`: give exactly one of `quadrature` or `phi`"
                            )))
                        }
                    }
                }
                LightSpec::SqueezedCoherent { g, s, theta } => {
                    finite(&format!("{key}.state.g"), g[0])?;
                    finite(&format!("{key}.state.g"), g[1])?;
                    non_negative(&format!("{key}.state.s"), *s)?;
                    finite(&format!("{key}.state.theta"), *theta)?;
                }
                LightSpec::Fock { .. } => {}
            }
        }
        if let Some(z) = &self.grids.z {
            length_axis("grids.z", z)?;
        }
        time_axis("grids.tau", &self.grids.tau)?;
        if let Some(t) = &self.grids.tau_prime {
            time_axis("grids.tau_prime", t)?;
        }
        if let Some(d) = &self.grids.d {
            length_axis("grids.d", d)?;
        }
        let t = &self.tolerances;
        if !(t.tail_epsilon > 0.0 && t.tail_epsilon <= 1e-6) {
            return Err(CliError::Config(
                "`tolerances.tail_epsilon`: must lie in (0, 1e-6]".into(),
            ));
        }
        positive("tolerances.sideband_tail", t.sideband_tail)?;
        positive("tolerances.unitarity", t.unitarity)?;
        if let Some(f) = &self.fwhm {
            if f.samples_per_period < qpinem::propagation::MIN_SAMPLES_PER_PERIOD {
                return Err(CliError::Config(format!(
                    "`fwhm.samples_per_period`: must be at least {}",
                    qpinem::propagation::MIN_SAMPLES_PER_PERIOD
                )));
            }
        }
        if let Some(d) = &self.dmatrix {
            finite("dmatrix.z", d.z)?;
        }
        if let Some(i) = &self.interfere {
            finite("interfere.z", i.z)?;
            finite("interfere.z_prime", i.z_prime)?;
            if i.phi.is_empty() {
                return Err(CliError::Config(
                    "`interfere.phi`: at least one phase".into(),
                ));
            }
            for p in &i.phi {
                finite("interfere.phi", *p)?;
            }
        }
        if let Some(d) = &self.delta {
            if d.m.is_empty() {
                return Err(CliError::Config("`delta.m`: at least one harmonic".into()));
            }
            positive("delta.beta0_sample_abs", d.beta0_sample_abs)?;
            finite("delta.beta0_sample_arg", d.beta0_sample_arg)?;
        }
        Ok(())
    }

    pub fn beta0(&self) -> Complex64 {
        Complex64::from_polar(self.coupling.beta0_abs, self.coupling.beta0_arg)
    }

    /// The section a subcommand needs, or a config error naming it.
    pub fn require<'a, T>(section: &'a Option<T>, key: &str) -> Result<&'a T, CliError> {
        section.as_ref().ok_or_else(|| {
            CliError::Config(format!("`{key}`: section required by this subcommand"))
        })
    }
}

fn finite(key: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "`{key}`: must be finite, got {v}"
        )))
    }
}

fn positive(key: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "`{key}`: must be positive, got {v}"
        )))
    }
}

fn non_negative(key: &str, v: f64) -> Result<(), CliError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("`{key}`: must be >= 0, got {v}")))
    }
}

fn length_axis(key: &str, a: &LengthAxis) -> Result<(), CliError> {
    finite(&format!("{key}.start"), a.start)?;
    finite(&format!("{key}.stop"), a.stop)?;
    if a.samples == 0 {
        return Err(CliError::Config(format!(
            "`{key}.samples`: must be at least 1"
        )));
    }
    if a.samples > 1 && a.stop <= a.start {
        return Err(CliError::Config(format!("`{key}`: stop must exceed start")));
    }
    Ok(())
}

fn time_axis(key: &str, a: &TimeAxis) -> Result<(), CliError> {
    finite(&format!("{key}.start"), a.start)?;
    finite(&format!("{key}.stop"), a.stop)?;
    if a.samples == 0 {
        return Err(CliError::Config(format!(
            "`{key}.samples`: must be at least 1"
        )));
    }
    if a.stop <= a.start {
        return Err(CliError::Config(format!("`{key}`: stop must exceed start")));
    }
    Ok(())
}
