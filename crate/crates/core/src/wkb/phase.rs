use num_complex::Complex64;

use crate::calculus::conf_integral_fn;
use crate::error::{Error, Result};
use crate::model::{turning_tolerance, PhysicalContext, Potential};
use crate::quadrature::QuadratureSpec;

const SCAN_POINTS: usize = 4096;
const REGION_SAMPLES: usize = 257;

/// φ between two limits, in units of ℏ_α^α (so S₀ = ℏ_α^α·φ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseIntegral {
    pub value: f64,
    pub limits: (f64, f64),
    pub energy: f64,
    pub error: f64,
}

/// V(x) with errors mapped to NaN so quadrature reports them as evaluation failures.
pub(crate) fn potential_or_nan(v: &Potential, x: f64, ctx: &PhysicalContext) -> f64 {
    v.value(x, ctx).unwrap_or(f64::NAN)
}

/// `(1/ℏ_α^α) ∫_{x1}^{x2} p^α(x) x^{α-1} dx` over a classically allowed interval.
/// Turning points at the ends are fine; interior forbidden points are not.
pub fn phase_integral(
    v: &Potential,
    energy: f64,
    x1: f64,
    x2: f64,
    ctx: &PhysicalContext,
    spec: &QuadratureSpec,
) -> Result<PhaseIntegral> {
    if !(x1 >= 0.0 && x2 >= x1 && x2.is_finite()) {
        return Err(Error::Domain(format!(
            "phase integral needs 0 <= x1 <= x2, got [{x1}, {x2}]"
        )));
    }
    if x1 == x2 {
        return Ok(PhaseIntegral {
            value: 0.0,
            limits: (x1, x2),
            energy,
            error: 0.0,
        });
    }
    let tol = turning_tolerance(energy);
    let width = x2 - x1;
    for i in 1..REGION_SAMPLES {
        let x = x1 + width * i as f64 / REGION_SAMPLES as f64;
        let pot = v.value(x, ctx)?;
        if pot > energy + tol {
            return Err(Error::Region(format!(
                "x = {x} inside [{x1}, {x2}] is classically forbidden (V = {pot} > E = {energy})"
            )));
        }
    }
    let two_m = 2.0 * ctx.mass_alpha();
    let est = conf_integral_fn(
        |x| (two_m * (energy - potential_or_nan(v, x, ctx)).max(0.0)).sqrt(),
        x1,
        x2,
        ctx.alpha(),
        spec,
    )?;
    let hbar = ctx.hbar_alpha();
    Ok(PhaseIntegral {
        value: est.value / hbar,
        limits: (x1, x2),
        energy,
        error: est.error / hbar,
    })
}

/// Roots of `E − V(x)` in `interval`, located on a uniform scan and bisected to
/// relative width 1e-12. Jumps (hard walls, the Coulomb edge) are not roots.
pub fn turning_points(
    v: &Potential,
    energy: f64,
    interval: (f64, f64),
    ctx: &PhysicalContext,
) -> Vec<f64> {
    let (a, b) = interval;
    if !(b > a && b.is_finite() && a >= 0.0) {
        return Vec::new();
    }
    let gap = |x: f64| -> f64 {
        match v.value(x, ctx) {
            Ok(p) if p.is_infinite() => f64::NEG_INFINITY,
            Ok(p) => energy - p,
            Err(_) => f64::NAN,
        }
    };
    let grid = |i: usize| a + (b - a) * i as f64 / SCAN_POINTS as f64;
    let start = if a > 0.0 { 0 } else { 1 };
    let jump_tol = 1e-6 * energy.abs().max(1.0);
    let mut roots: Vec<f64> = Vec::new();
    let mut prev_x = grid(start);
    let mut prev_g = gap(prev_x);
    for i in start + 1..=SCAN_POINTS {
        let x = grid(i);
        let g = gap(x);
        if prev_g.is_nan() || g.is_nan() {
            prev_x = x;
            prev_g = g;
            continue;
        }
        if prev_g == 0.0 {
            if roots.last() != Some(&prev_x) {
                roots.push(prev_x);
            }
        } else if g != 0.0 && (prev_g > 0.0) != (g > 0.0) {
            let (mut lo, mut hi, mut glo) = (prev_x, x, prev_g);
            while hi - lo > 1e-12 * hi.abs().max(f64::MIN_POSITIVE) {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let gm = gap(mid);
                if gm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (gm > 0.0) == (glo > 0.0) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            let continuous = (gap(lo) - gap(hi)).abs() <= jump_tol;
            if continuous {
                roots.push(0.5 * (lo + hi));
            }
        }
        prev_x = x;
        prev_g = g;
    }
    if prev_g == 0.0 && roots.last() != Some(&prev_x) {
        roots.push(prev_x);
    }
    roots
}

/// Leading terms of the ℏ_α^α expansion of the principal function:
/// `S₀ = ∫_{x0}^{x} p^α d^αx` (positive branch) and `S₁ = (i/2) ln p^α(x)`.
pub fn hamilton_principal_terms(
    v: &Potential,
    energy: f64,
    x0: f64,
    x: f64,
    ctx: &PhysicalContext,
    spec: &QuadratureSpec,
) -> Result<(f64, Complex64)> {
    let (lo, hi, sign) = if x >= x0 { (x0, x, 1.0) } else { (x, x0, -1.0) };
    let phase = phase_integral(v, energy, lo, hi, ctx, spec)?;
    let s0 = sign * ctx.hbar_alpha() * phase.value;
    let pot = v.value(x, ctx)?;
    let p = (2.0 * ctx.mass_alpha() * (energy - pot)).sqrt();
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Region(format!(
            "S1 needs a classical point, p({x}) = {p}"
        )));
    }
    Ok((s0, Complex64::new(0.0, 0.5 * p.ln())))
}
