//! The fully resolved run configuration, as echoed by `--dump-config`.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use conformable_wkb::oracle::OracleConfig;
use conformable_wkb::validate::Scope;
use conformable_wkb::wkb::SolverConfig;
use conformable_wkb::{AlphaOrder, PhysicalContext, Potential, QuadratureSpec, UnitSystem};
use serde::{Deserialize, Serialize};

use crate::table::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Natural,
    Nuclear,
}

impl From<Units> for UnitSystem {
    fn from(u: Units) -> Self {
        match u {
            Units::Natural => UnitSystem::Natural,
            Units::Nuclear => UnitSystem::NuclearMevFm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WavePotential {
    Well,
    Oscillator,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub quadrature_rel: f64,
    pub quadrature_abs: f64,
    pub max_subdivisions: usize,
    pub energy_rel: f64,
    pub oracle_rel: f64,
    pub oracle_points: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        let s = SolverConfig::default();
        let o = OracleConfig::default();
        Self {
            quadrature_rel: q.rel_tol,
            quadrature_abs: q.abs_tol,
            max_subdivisions: q.max_subdivisions,
            energy_rel: s.energy_rel_tol,
            oracle_rel: o.rel_tol,
            oracle_points: o.points,
        }
    }
}

impl Tolerances {
    pub fn quadrature(&self) -> Result<QuadratureSpec> {
        Ok(QuadratureSpec::new(
            self.quadrature_rel,
            self.quadrature_abs,
            self.max_subdivisions,
        )?)
    }

    pub fn solver(&self) -> Result<SolverConfig> {
        if !(self.energy_rel > 0.0 && self.energy_rel < 1.0) {
            bail!(
                "energy tolerance must lie in (0, 1), got {}",
                self.energy_rel
            );
        }
        Ok(SolverConfig {
            energy_rel_tol: self.energy_rel,
            quadrature: self.quadrature()?,
            ..SolverConfig::default()
        })
    }

    pub fn oracle(&self) -> Result<OracleConfig> {
        if !(self.oracle_rel > 0.0 && self.oracle_rel < 1.0) {
            bail!(
                "oracle tolerance must lie in (0, 1), got {}",
                self.oracle_rel
            );
        }
        if self.oracle_points < 101 {
            bail!(
                "oracle grid needs at least 101 points, got {}",
                self.oracle_points
            );
        }
        Ok(OracleConfig {
            points: self.oracle_points,
            rel_tol: self.oracle_rel,
            ..OracleConfig::default()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase", deny_unknown_fields)]
pub enum CommandConfig {
    Well {
        length: f64,
        n_max: usize,
        inner_potential: Option<PathBuf>,
    },
    Oscillator {
        omega: f64,
        lambda: f64,
        n_max: usize,
    },
    Decay {
        z: f64,
        /// Kinetic energy E; the library works with E^α.
        energy: f64,
        r1: f64,
    },
    Wavefunction {
        potential: WavePotential,
        length: f64,
        omega: f64,
        lambda: f64,
        n: Option<usize>,
        energy: Option<f64>,
        x_min: Option<f64>,
        x_max: Option<f64>,
        points: usize,
    },
    Validate {
        scope: Scope,
        closed_form_perturbation: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub alpha: f64,
    pub units: Units,
    /// ℏ_α^α in natural units; defaults to 1.
    pub hbar: Option<f64>,
    /// m^α in natural units; defaults to 1.
    pub mass: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tolerances: Tolerances,
    #[serde(flatten)]
    pub command: CommandConfig,
}

impl RunConfig {
    pub fn alpha(&self) -> Result<AlphaOrder> {
        Ok(AlphaOrder::new(self.alpha)?)
    }

    pub fn context(&self) -> Result<PhysicalContext> {
        let alpha = self.alpha()?;
        match self.units {
            Units::Natural => Ok(PhysicalContext::natural_with(
                alpha,
                self.hbar.unwrap_or(1.0),
                self.mass.unwrap_or(1.0),
            )?),
            Units::Nuclear => {
                if self.hbar.is_some() || self.mass.is_some() {
                    bail!("--hbar and --mass apply to natural units only");
                }
                Ok(PhysicalContext::nuclear(alpha))
            }
        }
    }

    /// Checks every parameter before any computation.
    pub fn validate(&self) -> Result<()> {
        let ctx = self.context()?;
        self.tolerances.solver()?;
        self.tolerances.oracle()?;
        match &self.command {
            CommandConfig::Well {
                length,
                n_max,
                inner_potential,
            } => {
                Potential::infinite_well(*length, None)?;
                if let Some(path) = inner_potential {
                    crate::inner::InnerTable::from_path(path)?.check_covers(*length)?;
                }
                if *n_max < 1 {
                    bail!("--n-max must be at least 1 for the well");
                }
            }
            CommandConfig::Oscillator { omega, lambda, .. } => {
                Potential::damped_oscillator(*omega, *lambda, &ctx)?;
            }
            CommandConfig::Decay { z, energy, r1 } => {
                if !(*energy > 0.0 && energy.is_finite()) {
                    bail!("--energy must be positive, got {energy}");
                }
                Potential::coulomb_barrier(*z, *r1, &ctx)?;
                let top = ctx.coulomb_strength(*z) / (self.alpha * r1.powf(self.alpha));
                let e_alpha = energy.powf(self.alpha);
                if e_alpha >= top {
                    bail!(conformable_wkb::Error::NoBarrier {
                        energy: e_alpha,
                        barrier: top
                    });
                }
            }
            CommandConfig::Wavefunction {
                potential,
                length,
                omega,
                lambda,
                n,
                energy,
                x_min,
                x_max,
                points,
            } => {
                match potential {
                    WavePotential::Well => {
                        Potential::infinite_well(*length, None)?;
                        if *n == Some(0) {
                            bail!("well states start at n = 1");
                        }
                    }
                    WavePotential::Oscillator => {
                        Potential::damped_oscillator(*omega, *lambda, &ctx)?;
                    }
                }
                match (n, energy) {
                    (Some(_), Some(_)) => bail!("give either --n or --energy, not both"),
                    (None, None) => bail!("one of --n or --energy is required"),
                    (None, Some(e)) if !(*e > 0.0 && e.is_finite()) => {
                        bail!("--energy must be positive, got {e}")
                    }
                    _ => {}
                }
                if *points < 2 {
                    bail!("--points must be at least 2");
                }
                if let (Some(a), Some(b)) = (x_min, x_max) {
                    if !(*a >= 0.0 && b > a) {
                        bail!("x-range must satisfy 0 <= x-min < x-max, got [{a}, {b}]");
                    }
                }
            }
            CommandConfig::Validate {
                closed_form_perturbation,
                ..
            } => {
                if !closed_form_perturbation.is_finite() {
                    bail!("perturbation must be finite");
                }
            }
        }
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
