use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::phase::{phase_integral, turning_points};
use super::{EnergyLevel, LevelMethod};
use crate::error::{Error, Result};
use crate::model::{PhysicalContext, Potential};
use crate::quadrature::QuadratureSpec;

/// Energy-search settings for the quantization solvers.
///
/// The bracket is found on a geometric scan of `E − E_floor` between
/// `e_max·1e-6` and `e_max` with `scan_points` samples; if no sample reaches the
/// target phase, `e_max` is multiplied by 4 up to `expansions` times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub e_max: f64,
    pub scan_points: usize,
    pub expansions: usize,
    /// Relative width at which bisection on E stops.
    pub energy_rel_tol: f64,
    pub quadrature: QuadratureSpec,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            e_max: 1e3,
            scan_points: 64,
            expansions: 3,
            energy_rel_tol: 1e-13,
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// `E^α = n²α²π²(ℏ_α^α)²/(2m^α L^{2α})`.
pub fn well_energy_closed(n: usize, length: f64, ctx: &PhysicalContext) -> EnergyLevel {
    let a = ctx.alpha().value();
    let hb = ctx.hbar_alpha();
    let nf = n as f64;
    EnergyLevel {
        n,
        energy: nf * nf * a * a * PI * PI * hb * hb
            / (2.0 * ctx.mass_alpha() * length.powf(2.0 * a)),
        method: LevelMethod::ClosedForm,
        residual: 0.0,
    }
}

/// `E^α = ℏ_α^α α √(ω^{2α} − λ²/4) (n + 1/2)`.
pub fn oscillator_energy_closed(
    n: usize,
    omega: f64,
    damping: f64,
    ctx: &PhysicalContext,
) -> EnergyLevel {
    let a = ctx.alpha().value();
    let w = (omega.powf(2.0 * a) - damping * damping / 4.0).sqrt();
    EnergyLevel {
        n,
        energy: ctx.hbar_alpha() * a * w * (n as f64 + 0.5),
        method: LevelMethod::ClosedForm,
        residual: 0.0,
    }
}

/// Solves `φ(E) = target` for a phase that is strictly increasing in E above `floor`.
fn solve_monotone<F: Fn(f64) -> Result<f64>>(
    phase: F,
    target: f64,
    floor: f64,
    cfg: &SolverConfig,
) -> Result<(f64, f64)> {
    let mut e_max = cfg.e_max;
    let points = cfg.scan_points.max(2);
    let mut bracket = None;
    'expand: for _ in 0..=cfg.expansions {
        let s_min = e_max * 1e-6;
        let ratio = (e_max / s_min).powf(1.0 / (points - 1) as f64);
        let mut prev = floor;
        for i in 0..points {
            let e = floor + s_min * ratio.powi(i as i32);
            if phase(e)? >= target {
                bracket = Some((prev, e));
                break 'expand;
            }
            prev = e;
        }
        e_max *= 4.0;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::UnboundedSearch {
        e_max: e_max / 4.0,
        target,
    })?;
    while hi - lo > cfg.energy_rel_tol * hi.abs().max(f64::MIN_POSITIVE) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phase(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let e = 0.5 * (lo + hi);
    let residual = ((phase(e)? - target) / target).abs();
    Ok((e, residual))
}

/// Hard-wall rule `φ(L) = nπ`, n ≥ 1.
pub fn quantize_hard_wall(
    v: &Potential,
    n: usize,
    ctx: &PhysicalContext,
    cfg: &SolverConfig,
) -> Result<EnergyLevel> {
    let Potential::InfiniteWell { length, inner } = v else {
        return Err(Error::Shape(format!(
            "hard-wall quantization needs an infinite well, got {}",
            v.name()
        )));
    };
    if n < 1 {
        return Err(Error::Domain("hard-wall quantum number starts at 1".into()));
    }
    let length = *length;
    // the whole well must stay classically allowed
    let floor = match inner {
        None => 0.0,
        Some(_) => {
            let mut top = f64::NEG_INFINITY;
            for i in 1..=1024 {
                top = top.max(v.value(length * i as f64 / 1024.0, ctx)?);
            }
            top
        }
    };
    let target = n as f64 * PI;
    let phase = |e: f64| phase_integral(v, e, 0.0, length, ctx, &cfg.quadrature).map(|p| p.value);
    let at_floor = phase(floor)?;
    if at_floor >= target {
        return Err(Error::Region(format!(
            "level n = {n} lies below the top of the inner potential (phase {at_floor} at E = {floor})"
        )));
    }
    let (energy, residual) = solve_monotone(phase, target, floor, cfg)?;
    Ok(EnergyLevel {
        n,
        energy,
        method: LevelMethod::HardWallSolver,
        residual,
    })
}

/// Outer extent at which a confining potential exceeds `energy`.
fn confining_extent(v: &Potential, energy: f64, ctx: &PhysicalContext) -> Result<f64> {
    let (lo, hi) = v.domain();
    if hi.is_finite() {
        return Ok(hi);
    }
    let mut x = lo.max(1.0);
    let mut found = false;
    for _ in 0..400 {
        if v.value(x, ctx)? > energy {
            found = true;
            break;
        }
        x *= 2.0;
    }
    if !found {
        return Err(Error::Shape(format!(
            "{} does not confine energy {energy}",
            v.name()
        )));
    }
    // shrink so the turning point sits in the outer half of the scan range
    for _ in 0..1000 {
        let half = 0.5 * x;
        if half <= lo || v.value(half, ctx)? <= energy {
            break;
        }
        x = half;
    }
    Ok(x)
}

/// Connection rule `φ(x₁, x₂) = (n + 1/2)π`, n ≥ 0. Symmetric potentials use
/// `φ(−x₂, x₂) = 2·φ(0, x₂)`.
pub fn quantize_connection(
    v: &Potential,
    n: usize,
    ctx: &PhysicalContext,
    cfg: &SolverConfig,
) -> Result<EnergyLevel> {
    let floor = match v {
        Potential::DampedOscillator { .. } => 0.0,
        Potential::Custom { domain, .. } => {
            let (a, b) = *domain;
            let mut low = f64::INFINITY;
            for i in 1..1024 {
                low = low.min(v.value(a + (b - a) * i as f64 / 1024.0, ctx)?);
            }
            low
        }
        other => {
            return Err(Error::Shape(format!(
            "connection quantization needs a confining potential with two turning points, got {}",
            other.name()
        )))
        }
    };
    let symmetric = v.is_symmetric();
    let phase = |e: f64| -> Result<f64> {
        let extent = confining_extent(v, e, ctx)?;
        let start = v.domain().0;
        let tps = turning_points(v, e, (start, extent), ctx);
        if symmetric {
            match tps.as_slice() {
                [x2] => Ok(2.0 * phase_integral(v, e, 0.0, *x2, ctx, &cfg.quadrature)?.value),
                _ => Err(Error::Shape(format!(
                    "expected one positive turning point of the symmetric potential at E = {e}, found {}",
                    tps.len()
                ))),
            }
        } else {
            match tps.as_slice() {
                [x1, x2] => Ok(phase_integral(v, e, *x1, *x2, ctx, &cfg.quadrature)?.value),
                _ => Err(Error::Shape(format!(
                    "expected two turning points at E = {e}, found {}",
                    tps.len()
                ))),
            }
        }
    };
    let target = (n as f64 + 0.5) * PI;
    let (energy, residual) = solve_monotone(phase, target, floor, cfg)?;
    Ok(EnergyLevel {
        n,
        energy,
        method: LevelMethod::ConnectionSolver,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{AlphaOrder, RealFunction};
    use approx::assert_relative_eq;

    fn alpha(a: f64) -> AlphaOrder {
        AlphaOrder::new(a).unwrap()
    }

    #[test]
    fn well_closed_form_values() {
        let ctx = PhysicalContext::natural(AlphaOrder::ONE);
        assert_relative_eq!(
            well_energy_closed(1, 1.0, &ctx).energy,
            4.934_802_200_544_679,
            max_relative = 1e-14
        );
        let ctx = PhysicalContext::natural(alpha(0.5));
        assert_relative_eq!(
            well_energy_closed(1, 1.0, &ctx).energy,
            1.233_700_550_136_17,
            max_relative = 1e-12
        );
    }

    #[test]
    fn hard_wall_matches_closed_form() {
        let cfg = SolverConfig::default();
        for &a in &[0.25, 0.5, 1.0] {
            let ctx = PhysicalContext::natural_with(alpha(a), 0.8, 1.3).unwrap();
            let well = Potential::infinite_well(1.7, None).unwrap();
            for n in [1, 4, 10] {
                let lvl = quantize_hard_wall(&well, n, &ctx, &cfg).unwrap();
                let exact = well_energy_closed(n, 1.7, &ctx).energy;
                assert_relative_eq!(lvl.energy, exact, max_relative = 1e-9);
                assert!(lvl.residual < 1e-9);
            }
        }
    }

    #[test]
    fn hard_wall_errors() {
        let cfg = SolverConfig::default();
        let ctx = PhysicalContext::natural(AlphaOrder::ONE);
        let well = Potential::infinite_well(1.0, None).unwrap();
        assert!(quantize_hard_wall(&well, 0, &ctx, &cfg).is_err());
        let osc = Potential::damped_oscillator(1.0, 0.0, &ctx).unwrap();
        assert!(matches!(
            quantize_hard_wall(&osc, 1, &ctx, &cfg),
            Err(Error::Shape(_))
        ));
        let tiny = SolverConfig {
            e_max: 1e-3,
            expansions: 0,
            ..cfg
        };
        assert!(matches!(
            quantize_hard_wall(&well, 5, &ctx, &tiny),
            Err(Error::UnboundedSearch { .. })
        ));
    }

    #[test]
    fn hard_wall_with_slowly_varying_floor_raises_levels() {
        let cfg = SolverConfig::default();
        let ctx = PhysicalContext::natural(AlphaOrder::ONE);
        let flat = Potential::infinite_well(1.0, None).unwrap();
        let tilted = Potential::infinite_well(1.0, Some(RealFunction::new(|x| 0.5 * x))).unwrap();
        for n in 1..4 {
            let e0 = quantize_hard_wall(&flat, n, &ctx, &cfg).unwrap().energy;
            let e1 = quantize_hard_wall(&tilted, n, &ctx, &cfg).unwrap().energy;
            // first-order shift is the mean of the floor
            assert!(
                e1 > e0 && (e1 - e0 - 0.25).abs() < 0.02,
                "n={n}: {e0} -> {e1}"
            );
        }
    }

    #[test]
    fn oscillator_values() {
        let cfg = SolverConfig::default();
        let ctx = PhysicalContext::natural(AlphaOrder::ONE);
        let osc = Potential::damped_oscillator(2.0, 2.0, &ctx).unwrap();
        let lvl = quantize_connection(&osc, 0, &ctx, &cfg).unwrap();
        assert_relative_eq!(lvl.energy, 3f64.sqrt() / 2.0, max_relative = 1e-9);
        let plain = Potential::damped_oscillator(1.0, 0.0, &ctx).unwrap();
        for n in 0..3 {
            let lvl = quantize_connection(&plain, n, &ctx, &cfg).unwrap();
            assert_relative_eq!(lvl.energy, n as f64 + 0.5, max_relative = 1e-9);
        }
    }

    #[test]
    fn oscillator_matches_closed_form_across_alpha() {
        let cfg = SolverConfig::default();
        for &a in &[0.3, 0.5, 0.9] {
            let ctx = PhysicalContext::natural_with(alpha(a), 1.2, 0.7).unwrap();
            let osc = Potential::damped_oscillator(2.0, 1.5, &ctx).unwrap();
            for n in [0, 3, 5] {
                let lvl = quantize_connection(&osc, n, &ctx, &cfg).unwrap();
                let exact = oscillator_energy_closed(n, 2.0, 1.5, &ctx).energy;
                assert_relative_eq!(lvl.energy, exact, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn custom_two_turning_point_well() {
        // shifted harmonic well on (0, 10): V = (x-5)²/2, exact WKB spectrum n + 1/2
        let cfg = SolverConfig::default();
        let ctx = PhysicalContext::natural(AlphaOrder::ONE);
        let v = Potential::custom(
            RealFunction::new(|x| 0.5 * (x - 5.0) * (x - 5.0)),
            (0.0, 10.0),
        )
        .unwrap();
        for n in 0..3 {
            let lvl = quantize_connection(&v, n, &ctx, &cfg).unwrap();
            assert_relative_eq!(lvl.energy, n as f64 + 0.5, max_relative = 1e-8);
        }
    }

    #[test]
    fn connection_rejects_nonconfining() {
        let cfg = SolverConfig::default();
        let ctx = PhysicalContext::natural(AlphaOrder::ONE);
        let c = Potential::constant(0.0).unwrap();
        assert!(matches!(
            quantize_connection(&c, 0, &ctx, &cfg),
            Err(Error::Shape(_))
        ));
        // monotone ramp: one turning point only
        let ramp = Potential::custom(RealFunction::new(|x| x), (0.0, 10.0)).unwrap();
        assert!(matches!(
            quantize_connection(&ramp, 0, &ctx, &cfg),
            Err(Error::Shape(_))
        ));
    }
}
