use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::calculus::conf_integral_fn;
use crate::error::{Error, Result};
use crate::model::{PhysicalContext, Potential, K1, K2};
use crate::quadrature::QuadratureSpec;

/// Above this `r₁^α/r₂^α` the thin-barrier expansion is flagged as unreliable.
pub const THIN_BARRIER_RATIO_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TunnelingMethod {
    Quadrature,
    ClosedForm,
    ThinBarrier,
}

impl std::fmt::Display for TunnelingMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TunnelingMethod::Quadrature => "quadrature",
            TunnelingMethod::ClosedForm => "closed-form",
            TunnelingMethod::ThinBarrier => "thin-barrier",
        })
    }
}

/// Gamow factor γ_α and transmission `T_α = exp(−2γ_α)` across `[r₁, r₂]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelingResult {
    pub r1: f64,
    pub r2: f64,
    pub gamma: f64,
    pub transmission: f64,
    pub method: TunnelingMethod,
}

impl TunnelingResult {
    fn new(r1: f64, r2: f64, gamma: f64, method: TunnelingMethod) -> Self {
        Self {
            r1,
            r2,
            gamma,
            transmission: (-2.0 * gamma).exp(),
            method,
        }
    }

    /// `r₁^α / r₂^α`.
    pub fn radius_ratio(&self, alpha: crate::calculus::AlphaOrder) -> f64 {
        let a = alpha.value();
        (self.r1 / self.r2).powf(a)
    }
}

fn barrier_parts(v: &Potential, energy: f64, ctx: &PhysicalContext) -> Result<(f64, f64)> {
    let Potential::CoulombBarrier { r1, strength, .. } = v else {
        return Err(Error::Shape(format!(
            "Gamow factor needs a Coulomb barrier, got {}",
            v.name()
        )));
    };
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::Domain(format!(
            "energy must be positive, got {energy}"
        )));
    }
    let a = ctx.alpha().value();
    let top = strength / (a * r1.powf(a));
    let r2 = v.turning_radius(energy, ctx.alpha())?;
    if r2 < *r1 {
        if energy - top <= 1e-12 * top {
            return Ok((*r1, *r1));
        }
        return Err(Error::NoBarrier {
            energy,
            barrier: top,
        });
    }
    Ok((*r1, r2))
}

/// γ_α by quadrature of `(1/ℏ_α^α) ∫_{r₁}^{r₂} √(2m^α(A^α/(αr^α) − E^α)) r^{α−1} dr`.
pub fn gamow_factor(
    v: &Potential,
    energy: f64,
    ctx: &PhysicalContext,
    spec: &QuadratureSpec,
) -> Result<TunnelingResult> {
    let (r1, r2) = barrier_parts(v, energy, ctx)?;
    let Potential::CoulombBarrier { strength, .. } = v else {
        unreachable!("checked by barrier_parts")
    };
    if r2 <= r1 {
        return Ok(TunnelingResult::new(
            r1,
            r1,
            0.0,
            TunnelingMethod::Quadrature,
        ));
    }
    let a = ctx.alpha().value();
    let two_m = 2.0 * ctx.mass_alpha();
    let est = conf_integral_fn(
        |r| (two_m * (strength / (a * r.powf(a)) - energy).max(0.0)).sqrt(),
        r1,
        r2,
        ctx.alpha(),
        spec,
    )?;
    Ok(TunnelingResult::new(
        r1,
        r2,
        est.value / ctx.hbar_alpha(),
        TunnelingMethod::Quadrature,
    ))
}

/// Closed form of the conformable Gamow integral,
/// `(√(2m^αE^α)/ℏ_α^α)(1/α)[r₂^α arccos√(r₁^α/r₂^α) − √(r₁^α(r₂^α − r₁^α))]`.
pub fn gamow_closed(
    energy: f64,
    r1: f64,
    r2: f64,
    ctx: &PhysicalContext,
) -> Result<TunnelingResult> {
    if !(r1 > 0.0 && r2.is_finite()) {
        return Err(Error::Domain(format!(
            "radii must be positive and finite, got r1 = {r1}, r2 = {r2}"
        )));
    }
    if r1 > r2 {
        return Err(Error::Ordering(format!(
            "need r1 <= r2, got r1 = {r1}, r2 = {r2}"
        )));
    }
    if !(energy > 0.0) {
        return Err(Error::Domain(format!(
            "energy must be positive, got {energy}"
        )));
    }
    let a = ctx.alpha().value();
    let (s1, s2) = (r1.powf(a), r2.powf(a));
    let ratio = (s1 / s2).clamp(0.0, 1.0);
    let bracket = s2 * ratio.sqrt().acos() - (s1 * (s2 - s1).max(0.0)).sqrt();
    let gamma = (2.0 * ctx.mass_alpha() * energy).sqrt() / ctx.hbar_alpha() * bracket / a;
    Ok(TunnelingResult::new(
        r1,
        r2,
        gamma.max(0.0),
        TunnelingMethod::ClosedForm,
    ))
}

/// Thin-barrier Gamow factor
/// `K₁^α(π√2)^{1−α} z^α/(α√E^α) − K₂^α 4^{1−α} √(r₁^α z^α/α)` in nuclear units.
///
/// Negative values (far outside the thin-barrier regime) are clamped to zero.
pub fn gamow_thin_barrier(
    energy: f64,
    z: f64,
    r1: f64,
    ctx: &PhysicalContext,
) -> Result<TunnelingResult> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::Domain(format!(
            "energy must be positive, got {energy}"
        )));
    }
    if !(z >= 0.0 && r1 > 0.0) {
        return Err(Error::Domain(format!(
            "need z >= 0 and r1 > 0, got z = {z}, r1 = {r1}"
        )));
    }
    let a = ctx.alpha().value();
    let za = z.powf(a);
    let gamma = K1.powf(a) * (PI * SQRT_2).powf(1.0 - a) * za / (a * energy.sqrt())
        - K2.powf(a) * 4f64.powf(1.0 - a) * (r1.powf(a) * za / a).sqrt();
    let r2 = if z > 0.0 {
        (ctx.coulomb_strength(z) / (a * energy)).powf(1.0 / a)
    } else {
        r1
    };
    Ok(TunnelingResult::new(
        r1,
        r2,
        gamma.max(0.0),
        TunnelingMethod::ThinBarrier,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::AlphaOrder;
    use approx::assert_relative_eq;

    fn alpha(a: f64) -> AlphaOrder {
        AlphaOrder::new(a).unwrap()
    }

    #[test]
    fn closed_form_edge_cases() {
        let ctx = PhysicalContext::natural(alpha(0.7));
        let t = gamow_closed(2.0, 1.5, 1.5, &ctx).unwrap();
        assert_eq!(t.gamma, 0.0);
        assert_eq!(t.transmission, 1.0);
        let r2: f64 = 3.0;
        let t = gamow_closed(2.0, 1e-14, r2, &ctx).unwrap();
        let limit = (2.0 * 2.0f64).sqrt() * r2.powf(0.7) * PI / 2.0 / 0.7;
        assert_relative_eq!(t.gamma, limit, max_relative = 1e-4);
        assert!(matches!(
            gamow_closed(2.0, 2.0, 1.0, &ctx),
            Err(Error::Ordering(_))
        ));
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let spec = QuadratureSpec::default();
        for &a in &[0.4, 0.75, 1.0] {
            let ctx = PhysicalContext::natural_with(alpha(a), 0.9, 1.4).unwrap();
            let v = Potential::coulomb_barrier(3.0, 0.2, &ctx).unwrap();
            for &e in &[0.5, 2.0] {
                let q = gamow_factor(&v, e, &ctx, &spec).unwrap();
                let c = gamow_closed(e, q.r1, q.r2, &ctx).unwrap();
                assert_relative_eq!(q.gamma, c.gamma, max_relative = 1e-6);
                assert!(q.transmission > 0.0 && q.transmission <= 1.0);
            }
        }
    }

    #[test]
    fn barrier_top_gives_unit_transmission() {
        let spec = QuadratureSpec::default();
        let ctx = PhysicalContext::natural(alpha(0.5));
        let v = Potential::coulomb_barrier(2.0, 0.5, &ctx).unwrap();
        let top = v.value(0.5 + 1e-15, &ctx).unwrap();
        let t = gamow_factor(&v, top, &ctx, &spec).unwrap();
        assert!(t.gamma.abs() < 1e-6);
        assert_relative_eq!(t.transmission, 1.0, max_relative = 1e-5);
        let err = gamow_factor(&v, 2.0 * top, &ctx, &spec).unwrap_err();
        assert!(matches!(err, Error::NoBarrier { .. }));
    }

    #[test]
    fn thin_barrier_alpha_one_textbook() {
        let ctx = PhysicalContext::nuclear(AlphaOrder::ONE);
        let (e, z, r1) = (5.0f64, 90.0f64, 8.0f64);
        let t = gamow_thin_barrier(e, z, r1, &ctx).unwrap();
        assert_relative_eq!(
            t.gamma,
            K1 * z / e.sqrt() - K2 * (r1 * z).sqrt(),
            max_relative = 1e-12
        );
        let zero = gamow_thin_barrier(e, 0.0, r1, &ctx).unwrap();
        assert_eq!((zero.gamma, zero.transmission), (0.0, 1.0));
    }

    #[test]
    fn thin_barrier_tracks_closed_form_for_small_r1() {
        for &a in &[0.5, 0.75, 1.0] {
            let ctx = PhysicalContext::nuclear(alpha(a));
            let e = 5f64.powf(a);
            let r2 = Potential::coulomb_barrier(90.0, 1.0, &ctx)
                .unwrap()
                .turning_radius(e, ctx.alpha())
                .unwrap();
            let r1 = r2 * 5e-4f64.powf(1.0 / a);
            let thin = gamow_thin_barrier(e, 90.0, r1, &ctx).unwrap();
            let closed = gamow_closed(e, r1, r2, &ctx).unwrap();
            assert!((r1 / r2).powf(a) < 1e-3);
            assert_relative_eq!(thin.gamma, closed.gamma, max_relative = 1e-2);
            assert_relative_eq!(thin.r2, r2, max_relative = 1e-12);
        }
    }
}
