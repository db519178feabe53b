use num_complex::Complex64;
use qpinem::light::{
    coherent_state, fock_state, mpu_state, squeezed_coherent_state, squeezed_with_mean,
    state_moments, PhotonStateAmplitudes,
};
use qpinem::pinem::{modulate, CouplingCoefficient, ModulatedElectronState};
use qpinem::propagation::{
    coherence_matrix, density_matrix, fwhm_curve, linspace, profile_map, self_interference, Beam,
    CoherenceMatrix,
};
use qpinem::sample::{delta_m_sweep, SampleMode};
use serde_json::json;

use crate::config::{LengthAxis, LengthUnit, LightEntry, LightSpec, RunConfig, TimeAxis, TimeUnit};
use crate::error::CliError;
use crate::output::{num, OutputSink, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    State,
    Spectrum,
    Map,
    Fwhm,
    Dmatrix,
    Interfere,
    Delta,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::State => "state",
            Subcommand::Spectrum => "spectrum",
            Subcommand::Map => "map",
            Subcommand::Fwhm => "fwhm",
            Subcommand::Dmatrix => "dmatrix",
            Subcommand::Interfere => "interfere",
            Subcommand::Delta => "delta",
        }
    }
}

struct Prepared<'a> {
    entry: &'a LightEntry,
    state: PhotonStateAmplitudes,
    modulated: ModulatedElectronState,
}

impl Prepared<'_> {
    fn coherence(&self) -> CoherenceMatrix {
        coherence_matrix(&self.modulated)
    }

    fn derived(&self, beam: &Beam) -> serde_json::Value {
        let (mean, var) = state_moments(&self.state);
        json!({
            "z_talbot_m": beam.z_talbot(),
            "tau0_s": beam.tau0(),
            "electron_velocity_m_per_s": beam.electron.velocity,
            "photon_cutoff": self.state.cutoff(),
            "photon_mean": mean,
            "photon_variance": var,
            "beta_eff": self.modulated.coupling().beta_eff,
            "t_p_s": self.modulated.coupling().t_p,
            "l_max": self.modulated.l_max(),
            "unitarity_residual": self.modulated.unitarity_residual(),
        })
    }
}

fn build_state(entry: &LightEntry, cfg: &RunConfig) -> Result<PhotonStateAmplitudes, CliError> {
    let eps = cfg.tolerances.tail_epsilon;
    let state = match &entry.state {
        LightSpec::Coherent { n_mean } => coherent_state(*n_mean, eps)?,
        LightSpec::Squeezed {
            n_mean,
            s,
            quadrature,
            phi,
        } => {
            let phi = match (quadrature, phi) {
                (Some(q), _) => q.phi(),
                (None, Some(p)) => *p,
                (None, None) => unreachable!("validated"),
            };
            squeezed_with_mean(*n_mean, *s, phi, eps)?
        }
        LightSpec::SqueezedCoherent { g, s, theta } => {
            squeezed_coherent_state(Complex64::new(g[0], g[1]), *s, *theta, eps)?
        }
        LightSpec::Mpu { n_mean } => mpu_state(*n_mean, eps)?,
        LightSpec::Fock { n0 } => fock_state(*n0),
    };
    Ok(if entry.mixture {
        state.into_mixture()
    } else {
        state
    })
}

fn prepare<'a>(
    entry: &'a LightEntry,
    cfg: &RunConfig,
    beam: &Beam,
) -> Result<Prepared<'a>, CliError> {
    let state = build_state(entry, cfg)?;
    let coupling = CouplingCoefficient::new(cfg.beta0(), state.n_mean(), &beam.photon)?;
    let (_, modulated) = modulate(&state, &coupling, cfg.tolerances.sideband_tail)?;
    let residual = modulated.unitarity_residual();
    if residual > cfg.tolerances.unitarity {
        return Err(qpinem::Error::Contract {
            what: "unitarity",
            residual,
            tolerance: cfg.tolerances.unitarity,
        }
        .into());
    }
    Ok(Prepared {
        entry,
        state,
        modulated,
    })
}

fn length_values(axis: &LengthAxis, beam: &Beam) -> Vec<f64> {
    let scale = length_scale(axis.unit, beam);
    linspace(axis.start, axis.stop, axis.samples)
        .into_iter()
        .map(|v| v * scale)
        .collect()
}

fn length_scale(unit: LengthUnit, beam: &Beam) -> f64 {
    match unit {
        LengthUnit::M => 1.0,
        LengthUnit::Mm => 1e-3,
        LengthUnit::ZTalbot => beam.z_talbot(),
    }
}

fn time_values(axis: &TimeAxis, beam: &Beam) -> Vec<f64> {
    let scale = match axis.unit {
        TimeUnit::S => 1.0,
        TimeUnit::Fs => 1e-15,
        TimeUnit::Tau0 => beam.tau0(),
    };
    let n = axis.samples;
    (0..n)
        .map(|j| (axis.start + (axis.stop - axis.start) * j as f64 / n as f64) * scale)
        .collect()
}

fn axis(values: &[f64], unit: &str) -> serde_json::Value {
    json!({
        "start": values.first(),
        "stop": values.last(),
        "samples": values.len(),
        "unit": unit,
    })
}

pub fn run(cmd: Subcommand, cfg: &RunConfig, sink: &OutputSink) -> Result<(), CliError> {
    let beam = Beam::new(
        cfg.electron.kinetic_energy_ev,
        cfg.photon.energy_ev,
        cfg.mode,
    )?;
    let prepared: Vec<Prepared> = cfg
        .light
        .iter()
        .map(|e| prepare(e, cfg, &beam))
        .collect::<Result<_, _>>()?;

    match cmd {
        Subcommand::State => {
            for p in &prepared {
                let mut t = Table::new(&["n", "re", "im", "probability"])?;
                for (n, a) in p.state.amplitudes().iter().enumerate() {
                    t.push([n.to_string(), num(a.re), num(a.im), num(a.norm_sqr())])?;
                }
                sink.write(
                    &format!("state_{}", p.entry.label),
                    t,
                    Some(&p.entry.label),
                    p.derived(&beam),
                )?;
            }
        }
        Subcommand::Spectrum => {
            for p in &prepared {
                let mut t = Table::new(&["ell", "probability"])?;
                let l = p.modulated.l_max() as i64;
                for (i, pl) in p.modulated.sideband_populations().iter().enumerate() {
                    t.push([(i as i64 - l).to_string(), num(*pl)])?;
                }
                sink.write(
                    &format!("spectrum_{}", p.entry.label),
                    t,
                    Some(&p.entry.label),
                    p.derived(&beam),
                )?;
            }
        }
        Subcommand::Map => {
            let z = length_values(RunConfig::require(&cfg.grids.z, "grids.z")?, &beam);
            let tau = time_values(&cfg.grids.tau, &beam);
            for p in &prepared {
                let grid = profile_map(&p.coherence(), &beam, &z, &tau)?;
                let mut t = Table::new(&["z", "tau", "density"])?;
                for (i, zi) in z.iter().enumerate() {
                    for (j, tj) in tau.iter().enumerate() {
                        t.push_numbers(&[*zi, *tj, grid.values[[i, j]]])?;
                    }
                }
                let mut derived = p.derived(&beam);
                derived["axes"] = json!({"z": axis(&z, "m"), "tau": axis(&tau, "s")});
                derived["dispersion_mode"] = json!(grid.mode);
                sink.write(
                    &format!("map_{}", p.entry.label),
                    t,
                    Some(&p.entry.label),
                    derived,
                )?;
            }
        }
        Subcommand::Fwhm => {
            let z = length_values(RunConfig::require(&cfg.grids.z, "grids.z")?, &beam);
            let spp = RunConfig::require(&cfg.fwhm, "fwhm")?.samples_per_period;
            let curves: Vec<Vec<(f64, f64)>> = prepared
                .iter()
                .map(|p| fwhm_curve(&p.coherence(), &beam, &z, spp))
                .collect::<Result<_, _>>()?;
            let mut header = vec!["z".to_string()];
            header.extend(prepared.iter().map(|p| format!("fwhm_{}", p.entry.label)));
            let mut t = Table::new(&header)?;
            for (i, zi) in z.iter().enumerate() {
                let mut row = vec![*zi];
                row.extend(curves.iter().map(|c| c[i].1));
                t.push_numbers(&row)?;
            }
            let derived = json!({
                "z_talbot_m": beam.z_talbot(),
                "tau0_s": beam.tau0(),
                "samples_per_period": spp,
                "axes": {"z": axis(&z, "m")},
                "lights": prepared.iter().map(|p| (p.entry.label.clone(), p.derived(&beam))).collect::<serde_json::Map<_, _>>(),
            });
            sink.write("fwhm", t, None, derived)?;
        }
        Subcommand::Dmatrix => {
            let dm = RunConfig::require(&cfg.dmatrix, "dmatrix")?;
            let z = dm.z * length_scale(dm.unit, &beam);
            let tau = time_values(&cfg.grids.tau, &beam);
            let tau_p = match &cfg.grids.tau_prime {
                Some(a) => time_values(a, &beam),
                None => tau.clone(),
            };
            for p in &prepared {
                let grid = density_matrix(&p.coherence(), &beam, z, &tau, &tau_p)?;
                let mut t = Table::new(&["tau", "tau_prime", "re", "im"])?;
                for (i, ti) in tau.iter().enumerate() {
                    for (j, tj) in tau_p.iter().enumerate() {
                        let v = grid.values[[i, j]];
                        t.push_numbers(&[*ti, *tj, v.re, v.im])?;
                    }
                }
                let mut derived = p.derived(&beam);
                derived["z_m"] = json!(z);
                derived["axes"] = json!({"tau": axis(&tau, "s"), "tau_prime": axis(&tau_p, "s")});
                derived["dispersion_mode"] = json!(grid.mode);
                sink.write(
                    &format!("dmatrix_{}", p.entry.label),
                    t,
                    Some(&p.entry.label),
                    derived,
                )?;
            }
        }
        Subcommand::Interfere => {
            let ic = RunConfig::require(&cfg.interfere, "interfere")?;
            let scale = length_scale(ic.unit, &beam);
            let (z, zp) = (ic.z * scale, ic.z_prime * scale);
            let tau = time_values(&cfg.grids.tau, &beam);
            for p in &prepared {
                let cm = p.coherence();
                let mut t = Table::new(&["phi", "tau", "intensity"])?;
                for &phi in &ic.phi {
                    let values = self_interference(&cm, &beam, z, zp, phi, &tau)?;
                    for (tj, v) in tau.iter().zip(&values) {
                        t.push_numbers(&[phi, *tj, *v])?;
                    }
                }
                let mut derived = p.derived(&beam);
                derived["z_m"] = json!(z);
                derived["z_prime_m"] = json!(zp);
                derived["axes"] = json!({"tau": axis(&tau, "s")});
                derived["tau_shift_s"] = json!((z - zp) / beam.electron.velocity);
                sink.write(
                    &format!("interfere_{}", p.entry.label),
                    t,
                    Some(&p.entry.label),
                    derived,
                )?;
            }
        }
        Subcommand::Delta => {
            let dc = RunConfig::require(&cfg.delta, "delta")?;
            let d = length_values(RunConfig::require(&cfg.grids.d, "grids.d")?, &beam);
            let beta_s = Complex64::from_polar(dc.beta0_sample_abs, dc.beta0_sample_arg);
            let modes: Vec<SampleMode> =
                dc.m.iter()
                    .map(|&m| SampleMode::new(m, beta_s))
                    .collect::<Result<_, _>>()?;
            let ms: Vec<u32> = modes.iter().map(|m| m.harmonic_m).collect();
            for p in &prepared {
                let rows = delta_m_sweep(&p.modulated, &ms, &d, &beam.consts);
                let mut t = Table::new(&["d", "m", "abs", "re", "im"])?;
                for r in rows {
                    t.push([
                        num(r.d),
                        r.m.to_string(),
                        num(r.delta.norm()),
                        num(r.delta.re),
                        num(r.delta.im),
                    ])?;
                }
                let mut derived = p.derived(&beam);
                derived["axes"] = json!({"d": axis(&d, "m")});
                derived["sample_cutoffs"] =
                    json!(modes.iter().map(|m| m.n_prime_max).collect::<Vec<_>>());
                sink.write(
                    &format!("delta_{}", p.entry.label),
                    t,
                    Some(&p.entry.label),
                    derived,
                )?;
            }
        }
    }
    Ok(())
}
