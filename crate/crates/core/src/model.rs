//! Physical constants, α-deformed units, the potential models, local momentum
//! and probability flux.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::calculus::{
    conf_derivative_complex, AlphaOrder, ComplexFunction, DerivativeMethod, RealFunction,
};
use crate::error::{Error, Result};

/// Thin-barrier constant K₁ of the alpha-decay Gamow factor (MeV^{1/2}).
pub const K1: f64 = 1.986;
/// Thin-barrier constant K₂ of the alpha-decay Gamow factor (MeV^{1/2} fm^{-1/2}).
pub const K2: f64 = 1.485;
/// ħc in MeV·fm, used as the action scale of the nuclear unit system.
pub const HBAR_C_MEV_FM: f64 = 197.326_980_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitSystem {
    /// ℏ_α^α and m^α supplied directly (default 1), e²/4πε₀ = 1.
    Natural,
    /// Energies in MeV, lengths in fm; Coulomb and kinetic scales fixed by K₁, K₂.
    NuclearMevFm,
}

impl fmt::Display for UnitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitSystem::Natural => f.write_str("natural"),
            UnitSystem::NuclearMevFm => f.write_str("nuclear-MeV-fm"),
        }
    }
}

/// `ℏ_α^α = h / (2π)^{1/α}`.
pub fn hbar_from_planck(h: f64, alpha: AlphaOrder) -> f64 {
    h / (2.0 * PI).powf(1.0 / alpha.value())
}

/// Physical constants at a given order α.
///
/// `hbar_alpha` is always derived from `h`; it is cached, never set directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalContext {
    alpha: AlphaOrder,
    h: f64,
    hbar_alpha: f64,
    mass_alpha: f64,
    units: UnitSystem,
}

impl PhysicalContext {
    pub fn from_planck(
        alpha: AlphaOrder,
        h: f64,
        mass_alpha: f64,
        units: UnitSystem,
    ) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Config(format!(
                "Planck constant must be positive, got {h}"
            )));
        }
        if !(mass_alpha > 0.0 && mass_alpha.is_finite()) {
            return Err(Error::Config(format!(
                "mass must be positive, got {mass_alpha}"
            )));
        }
        Ok(Self {
            alpha,
            h,
            hbar_alpha: hbar_from_planck(h, alpha),
            mass_alpha,
            units,
        })
    }

    /// Natural units from a desired ℏ_α^α; `h` is back-computed and ℏ_α^α
    /// re-derived from it.
    pub fn natural_with(alpha: AlphaOrder, hbar_alpha: f64, mass_alpha: f64) -> Result<Self> {
        if !(hbar_alpha > 0.0 && hbar_alpha.is_finite()) {
            return Err(Error::Config(format!(
                "hbar must be positive, got {hbar_alpha}"
            )));
        }
        let h = hbar_alpha * (2.0 * PI).powf(1.0 / alpha.value());
        Self::from_planck(alpha, h, mass_alpha, UnitSystem::Natural)
    }

    /// ℏ_α^α = 1, m^α = 1.
    pub fn natural(alpha: AlphaOrder) -> Self {
        Self::natural_with(alpha, 1.0, 1.0).expect("unit constants are valid")
    }

    /// Nuclear MeV–fm units for the alpha-decay barrier.
    ///
    /// ℏ_α^α = (ħc)^α. The Coulomb strength A^α and the kinetic scale
    /// √(2m^α)/ℏ_α^α are fixed so that the Gamow integral at small r₁ reduces to
    /// `K₁^α(π√2)^{1-α} z^α/(α√E^α) − K₂^α 4^{1-α} √(r₁^α z^α/α)`; at α = 1 this
    /// gives e²/4πε₀ = 8K₁²/(π²K₂²) ≈ 1.4498 MeV·fm.
    pub fn nuclear(alpha: AlphaOrder) -> Self {
        let a = alpha.value();
        let hbar_alpha = HBAR_C_MEV_FM.powf(a);
        let kinetic = a * nuclear_gamow_prefactor(a);
        let mass_alpha = 0.5 * (kinetic * hbar_alpha).powi(2);
        let h = hbar_alpha * (2.0 * PI).powf(1.0 / a);
        Self::from_planck(alpha, h, mass_alpha, UnitSystem::NuclearMevFm)
            .expect("nuclear constants are valid")
    }

    pub fn for_units(alpha: AlphaOrder, units: UnitSystem) -> Self {
        match units {
            UnitSystem::Natural => Self::natural(alpha),
            UnitSystem::NuclearMevFm => Self::nuclear(alpha),
        }
    }

    #[inline]
    pub fn alpha(&self) -> AlphaOrder {
        self.alpha
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.h
    }

    /// ℏ_α^α.
    #[inline]
    pub fn hbar_alpha(&self) -> f64 {
        self.hbar_alpha
    }

    /// m^α.
    #[inline]
    pub fn mass_alpha(&self) -> f64 {
        self.mass_alpha
    }

    #[inline]
    pub fn units(&self) -> UnitSystem {
        self.units
    }

    /// Barrier strength A^α for daughter charge `z`.
    pub fn coulomb_strength(&self, z: f64) -> f64 {
        let a = self.alpha.value();
        match self.units {
            UnitSystem::Natural => (2.0 * z).powf(a),
            UnitSystem::NuclearMevFm => nuclear_coulomb_scale(a) * z.powf(a),
        }
    }
}

/// A^α / z^α in nuclear units.
fn nuclear_coulomb_scale(a: f64) -> f64 {
    let s = (4.0 / PI) * (K1 / K2).powf(a) * (PI * SQRT_2 / 4.0).powf(1.0 - a);
    s * s
}

/// The factor multiplying `[r₂^α π/2 − 2√(r₁^α r₂^α)]` in the thin-barrier Gamow factor.
fn nuclear_gamow_prefactor(a: f64) -> f64 {
    (2.0 / PI) * K1.powf(a) * (PI * SQRT_2).powf(1.0 - a) / nuclear_coulomb_scale(a)
}

/// Potential models. Energies are α-energies (the quantity written E^α, V_α).
#[derive(Debug, Clone)]
pub enum Potential {
    Constant {
        value: f64,
    },
    /// Hard walls at 0 and `length`; `inner` is the slowly varying floor (0 if absent).
    InfiniteWell {
        length: f64,
        inner: Option<RealFunction>,
    },
    /// Bateman damped oscillator `(m^α/2)(ω^{2α} − λ²/4) x^{2α}`, evenly extended to x < 0.
    DampedOscillator {
        omega: f64,
        damping: f64,
    },
    /// `A^α/(α r^α)` for r > r₁, zero inside.
    CoulombBarrier {
        z: f64,
        r1: f64,
        strength: f64,
    },
    Custom {
        f: RealFunction,
        domain: (f64, f64),
    },
}

impl Potential {
    pub fn constant(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Config(format!(
                "constant potential must be finite, got {value}"
            )));
        }
        Ok(Potential::Constant { value })
    }

    pub fn infinite_well(length: f64, inner: Option<RealFunction>) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Config(format!(
                "well width L must be positive, got {length}"
            )));
        }
        Ok(Potential::InfiniteWell { length, inner })
    }

    pub fn damped_oscillator(omega: f64, damping: f64, ctx: &PhysicalContext) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Config(format!(
                "omega must be positive, got {omega}"
            )));
        }
        if !(damping >= 0.0 && damping.is_finite()) {
            return Err(Error::Config(format!(
                "damping lambda must be nonnegative, got {damping}"
            )));
        }
        let p = Potential::DampedOscillator { omega, damping };
        let w2 = p.effective_frequency_sq(ctx.alpha());
        if w2 <= 0.0 {
            return Err(Error::Config(format!(
                "overdamped: omega^(2 alpha) - lambda^2/4 = {w2} must be > 0 (underdamped invariant)"
            )));
        }
        Ok(p)
    }

    pub fn coulomb_barrier(z: f64, r1: f64, ctx: &PhysicalContext) -> Result<Self> {
        if !(z >= 1.0 && z.is_finite()) {
            return Err(Error::Config(format!(
                "charge number z must be >= 1, got {z}"
            )));
        }
        if !(r1 > 0.0 && r1.is_finite()) {
            return Err(Error::Config(format!(
                "inner radius r1 must be positive, got {r1}"
            )));
        }
        Ok(Potential::CoulombBarrier {
            z,
            r1,
            strength: ctx.coulomb_strength(z),
        })
    }

    pub fn custom(f: RealFunction, domain: (f64, f64)) -> Result<Self> {
        if !(domain.0 >= 0.0 && domain.1 > domain.0) {
            return Err(Error::Config(format!(
                "custom domain must satisfy 0 <= a < b, got {domain:?}"
            )));
        }
        Ok(Potential::Custom { f, domain })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Potential::Constant { .. } => "constant",
            Potential::InfiniteWell { .. } => "infinite-well",
            Potential::DampedOscillator { .. } => "damped-oscillator",
            Potential::CoulombBarrier { .. } => "coulomb-barrier",
            Potential::Custom { .. } => "custom",
        }
    }

    /// Even extension to x < 0 applies.
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Potential::DampedOscillator { .. })
    }

    /// Where the model is defined on the positive half-line.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Potential::InfiniteWell { length, .. } => (0.0, *length),
            Potential::Custom { domain, .. } => *domain,
            _ => (0.0, f64::INFINITY),
        }
    }

    /// `ω^{2α} − λ²/4` for the damped oscillator, NaN otherwise.
    pub fn effective_frequency_sq(&self, alpha: AlphaOrder) -> f64 {
        match self {
            Potential::DampedOscillator { omega, damping } => {
                omega.powf(2.0 * alpha.value()) - damping * damping / 4.0
            }
            _ => f64::NAN,
        }
    }

    /// Outer turning radius of the Coulomb barrier, `r₂ = (A^α/(α E^α))^{1/α}`.
    pub fn turning_radius(&self, energy: f64, alpha: AlphaOrder) -> Result<f64> {
        match self {
            Potential::CoulombBarrier { strength, .. } => {
                if !(energy > 0.0) {
                    return Err(Error::Domain(format!(
                        "energy must be positive, got {energy}"
                    )));
                }
                let a = alpha.value();
                Ok((strength / (a * energy)).powf(1.0 / a))
            }
            _ => Err(Error::Shape(format!(
                "{} has no Coulomb turning radius",
                self.name()
            ))),
        }
    }

    /// V_α(x); may be +∞ outside hard walls.
    pub fn value(&self, x: f64, ctx: &PhysicalContext) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!(
                "potential evaluated at nonpositive x = {x}"
            )));
        }
        let a = ctx.alpha().value();
        match self {
            Potential::Constant { value } => Ok(*value),
            Potential::InfiniteWell { length, inner } => {
                if x > *length {
                    Ok(f64::INFINITY)
                } else {
                    match inner {
                        Some(v) => v.eval(x),
                        None => Ok(0.0),
                    }
                }
            }
            Potential::DampedOscillator { .. } => {
                let w2 = self.effective_frequency_sq(ctx.alpha());
                if w2 <= 0.0 {
                    return Err(Error::Config(format!("overdamped at alpha = {a}: {w2}")));
                }
                Ok(0.5 * ctx.mass_alpha() * w2 * x.powf(2.0 * a))
            }
            Potential::CoulombBarrier { r1, strength, .. } => {
                if x > *r1 {
                    Ok(strength / (a * x.powf(a)))
                } else {
                    Ok(0.0)
                }
            }
            Potential::Custom { f, domain } => {
                if x < domain.0 || x > domain.1 {
                    return Err(Error::Domain(format!(
                        "x = {x} outside custom potential domain {domain:?}"
                    )));
                }
                f.eval(x)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionTag {
    Classical,
    Forbidden,
    TurningPoint,
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionTag::Classical => "classical",
            RegionTag::Forbidden => "forbidden",
            RegionTag::TurningPoint => "turning-point",
        })
    }
}

/// `|E − V| ≤ 1e-9·max(|E|, 1)` counts as a turning point.
pub fn turning_tolerance(energy: f64) -> f64 {
    1e-9 * energy.abs().max(1.0)
}

pub fn classify(energy: f64, potential: f64) -> RegionTag {
    let diff = energy - potential;
    if diff.abs() <= turning_tolerance(energy) {
        RegionTag::TurningPoint
    } else if diff > 0.0 {
        RegionTag::Classical
    } else {
        RegionTag::Forbidden
    }
}

/// `|p^α(x)| = √(2m^α|E^α − V_α(x)|)` and the region it lies in. An infinite
/// potential gives an infinite magnitude in a Forbidden region.
pub fn local_momentum(
    v: &Potential,
    energy: f64,
    x: f64,
    ctx: &PhysicalContext,
) -> Result<(f64, RegionTag)> {
    let pot = v.value(x, ctx)?;
    if pot.is_infinite() {
        return Ok((f64::INFINITY, RegionTag::Forbidden));
    }
    let region = classify(energy, pot);
    let magnitude = match region {
        RegionTag::TurningPoint => 0.0,
        _ => (2.0 * ctx.mass_alpha() * (energy - pot).abs()).sqrt(),
    };
    Ok((magnitude, region))
}

/// α-probability flux `(ℏ_α^α/2im^α)(ψ* D^αψ − ψ D^αψ*)`, which equals
/// `(ℏ_α^α/m^α) Im(ψ* D^αψ)`.
pub fn probability_flux(psi: &ComplexFunction, x: f64, ctx: &PhysicalContext) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "flux evaluated at nonpositive x = {x}"
        )));
    }
    let d = conf_derivative_complex(psi, x, ctx.alpha(), DerivativeMethod::ChainIdentity)?;
    let p = psi.eval(x)?;
    Ok(ctx.hbar_alpha() / ctx.mass_alpha() * (p.conj() * d).im)
}
