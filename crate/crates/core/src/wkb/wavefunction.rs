use num_complex::Complex64;

use super::phase::{phase_integral, potential_or_nan, turning_points};
use crate::calculus::conf_integral_fn;
use crate::error::{Error, Result};
use crate::model::{classify, turning_tolerance, PhysicalContext, Potential, RegionTag};
use crate::quadrature::QuadratureSpec;

/// Branch constants of the WKB forms.
///
/// Classical regions use `(c1 sin φ + c2 cos φ)/√p`; forbidden regions at the
/// ends of the interval use `decaying·e^{−∫|p|/ℏ}/√|p|`; interior barriers add
/// `growing·e^{+∫|p|/ℏ}/√|p|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub decaying: f64,
    pub growing: f64,
}

impl WkbCoefficients {
    pub fn oscillatory(c1: f64, c2: f64) -> Self {
        Self {
            c1,
            c2,
            decaying: 0.0,
            growing: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Segment {
    start: f64,
    end: f64,
    region: RegionTag,
}

/// A WKB wavefunction at fixed energy over an interval of the positive half-line.
/// The phase in each classical segment is measured from that segment's left edge
/// (a turning point or the interval edge).
#[derive(Debug, Clone)]
pub struct WkbWavefunction {
    potential: Potential,
    energy: f64,
    ctx: PhysicalContext,
    coefficients: WkbCoefficients,
    segments: Vec<Segment>,
    spec: QuadratureSpec,
}

impl WkbWavefunction {
    pub fn new(
        potential: Potential,
        energy: f64,
        ctx: PhysicalContext,
        interval: (f64, f64),
        coefficients: WkbCoefficients,
        spec: QuadratureSpec,
    ) -> Result<Self> {
        let (a, b) = interval;
        if !(a >= 0.0 && b > a && b.is_finite()) {
            return Err(Error::Domain(format!(
                "wavefunction interval must satisfy 0 <= a < b, got {interval:?}"
            )));
        }
        let mut edges = vec![a];
        edges.extend(turning_points(&potential, energy, interval, &ctx));
        edges.push(b);
        let mut segments = Vec::with_capacity(edges.len() - 1);
        for w in edges.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let region = classify(energy, potential.value(mid, &ctx)?);
            segments.push(Segment {
                start: w[0],
                end: w[1],
                region,
            });
        }
        Ok(Self {
            potential,
            energy,
            ctx,
            coefficients,
            segments,
            spec,
        })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn interval(&self) -> (f64, f64) {
        (
            self.segments[0].start,
            self.segments[self.segments.len() - 1].end,
        )
    }

    /// `(start, end, region)` for each region between turning points.
    pub fn region_map(&self) -> Vec<(f64, f64, RegionTag)> {
        self.segments
            .iter()
            .map(|s| (s.start, s.end, s.region))
            .collect()
    }

    pub fn region_at(&self, x: f64) -> Result<RegionTag> {
        let pot = self.potential.value(x, &self.ctx)?;
        Ok(classify(self.energy, pot))
    }

    fn segment_index(&self, x: f64) -> Option<usize> {
        self.segments
            .iter()
            .position(|s| x >= s.start && x <= s.end)
    }

    /// `(1/ℏ_α^α)∫_{x1}^{x2} |p^α| d^αx` across a forbidden stretch.
    fn barrier_integral(&self, x1: f64, x2: f64) -> Result<f64> {
        if x1 == x2 {
            return Ok(0.0);
        }
        let (v, e, ctx) = (&self.potential, self.energy, &self.ctx);
        let two_m = 2.0 * ctx.mass_alpha();
        let est = conf_integral_fn(
            |x| (two_m * (potential_or_nan(v, x, ctx) - e).max(0.0)).sqrt(),
            x1,
            x2,
            ctx.alpha(),
            &self.spec,
        )?;
        Ok(est.value / ctx.hbar_alpha())
    }
}

/// Evaluates the WKB form at `x`. Turning-point neighborhoods are rejected.
pub fn wkb_eval(w: &WkbWavefunction, x: f64) -> Result<Complex64> {
    let (a, b) = w.interval();
    if !(x > 0.0 && x >= a && x <= b) {
        return Err(Error::Domain(format!(
            "x = {x} outside wavefunction interval [{a}, {b}]"
        )));
    }
    let pot = w.potential.value(x, &w.ctx)?;
    if pot.is_infinite() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let gap = w.energy - pot;
    if gap.abs() <= turning_tolerance(w.energy) {
        return Err(Error::Singularity { x });
    }
    let idx = w.segment_index(x).expect("x lies inside the interval");
    let seg = w.segments[idx];
    let p = (2.0 * w.ctx.mass_alpha() * gap.abs()).sqrt();
    let amp = 1.0 / p.sqrt();
    let c = w.coefficients;
    let value = if gap > 0.0 {
        let phi = phase_integral(&w.potential, w.energy, seg.start, x, &w.ctx, &w.spec)?.value;
        amp * (c.c1 * phi.sin() + c.c2 * phi.cos())
    } else {
        let last = w.segments.len() - 1;
        if idx == last && idx > 0 {
            amp * c.decaying * (-w.barrier_integral(seg.start, x)?).exp()
        } else if idx == 0 && last > 0 {
            amp * c.decaying * (-w.barrier_integral(x, seg.end)?).exp()
        } else {
            let kappa = w.barrier_integral(seg.start, x)?;
            amp * (c.decaying * (-kappa).exp() + c.growing * kappa.exp())
        }
    };
    Ok(Complex64::new(value, 0.0))
}

/// Local WKB validity parameter `ℏ_α^α |D^α p^α| / (p^α)²`; small means the
/// potential varies slowly on the scale of the local wavelength.
pub fn wkb_validity(v: &Potential, energy: f64, x: f64, ctx: &PhysicalContext) -> Result<f64> {
    let pot = v.value(x, ctx)?;
    let gap = energy - pot;
    if !gap.is_finite() || gap.abs() <= turning_tolerance(energy) {
        return Ok(f64::INFINITY);
    }
    let (lo, hi) = v.domain();
    let mut h = f64::EPSILON.cbrt() * x.max(1.0);
    h = h.min(0.5 * (x - lo)).min(0.5 * (hi - x));
    if !(h > 0.0) {
        return Ok(f64::INFINITY);
    }
    let dv = (v.value(x + h, ctx)? - v.value(x - h, ctx)?) / (2.0 * h);
    let p2 = 2.0 * ctx.mass_alpha() * gap.abs();
    // dp/dx = −m V'/p, so ℏ|D^α p|/p² = ℏ m |V'| x^{1−α} / p³
    let d = ctx.mass_alpha() * dv.abs() * x.powf(1.0 - ctx.alpha().value());
    Ok(ctx.hbar_alpha() * d / p2.powf(1.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::AlphaOrder;
    use crate::wkb::{normalized_well_wavefunction, plane_wave, Sign};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn alpha(a: f64) -> AlphaOrder {
        AlphaOrder::new(a).unwrap()
    }

    #[test]
    fn free_particle_reduces_to_plane_waves() {
        let spec = QuadratureSpec::default();
        let a = 0.6;
        let ctx = PhysicalContext::natural(alpha(a));
        let v = Potential::constant(0.0).unwrap();
        let e = 2.0;
        let p = (2.0f64 * e).sqrt();
        let w = WkbWavefunction::new(
            v,
            e,
            ctx,
            (0.0, 3.0),
            WkbCoefficients::oscillatory(1.0, 0.0),
            spec,
        )
        .unwrap();
        for &x in &[0.2, 1.0, 2.5] {
            let psi = wkb_eval(&w, x).unwrap();
            let pw = (plane_wave(x, p, alpha(a), Sign::Plus).unwrap()
                - plane_wave(x, p, alpha(a), Sign::Minus).unwrap())
                / Complex64::new(0.0, 2.0);
            assert!((psi - pw / p.sqrt()).norm() < 1e-12);
        }
    }

    #[test]
    fn well_wkb_form_matches_normalized_eigenfunction() {
        let spec = QuadratureSpec::default();
        let cfg = crate::wkb::SolverConfig::default();
        for &a in &[0.5, 1.0] {
            let ctx = PhysicalContext::natural(alpha(a));
            let well = Potential::infinite_well(1.0, None).unwrap();
            for n in 1..4 {
                let e = crate::wkb::quantize_hard_wall(&well, n, &ctx, &cfg)
                    .unwrap()
                    .energy;
                let p = (2.0 * e).sqrt();
                let c1 = (2.0 * a).sqrt() * p.sqrt();
                let w = WkbWavefunction::new(
                    well.clone(),
                    e,
                    ctx,
                    (0.0, 1.0),
                    WkbCoefficients::oscillatory(c1, 0.0),
                    spec,
                )
                .unwrap();
                for &x in &[0.1, 0.33, 0.9] {
                    let psi = wkb_eval(&w, x).unwrap().re;
                    let exact = normalized_well_wavefunction(n, x, alpha(a), 1.0).unwrap();
                    assert_relative_eq!(psi, exact, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn oscillator_regions_and_singularity() {
        let spec = QuadratureSpec::default();
        let ctx = PhysicalContext::natural(AlphaOrder::ONE);
        let osc = Potential::damped_oscillator(1.0, 0.0, &ctx).unwrap();
        let e = 1.5;
        let x2 = (2.0f64 * e).sqrt();
        let coeffs = WkbCoefficients {
            c1: 0.0,
            c2: 1.0,
            decaying: 0.5,
            growing: 0.0,
        };
        let w = WkbWavefunction::new(osc, e, ctx, (0.0, 4.0), coeffs, spec).unwrap();
        let map = w.region_map();
        assert_eq!(map.len(), 2);
        assert_eq!(map[0].2, RegionTag::Classical);
        assert_eq!(map[1].2, RegionTag::Forbidden);
        assert_relative_eq!(map[0].1, x2, max_relative = 1e-11);
        assert!(matches!(
            wkb_eval(&w, map[0].1),
            Err(Error::Singularity { .. })
        ));
        // decays monotonically beyond the turning point
        let mut prev = f64::INFINITY;
        for i in 1..20 {
            let x = x2 + 0.1 * i as f64;
            let v = wkb_eval(&w, x).unwrap().re;
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
    }

    #[test]
    fn amplitude_law_at_phase_peaks() {
        // |ψ|² p is the same at every point where sin φ = ±1
        let spec = QuadratureSpec::default();
        let a = 0.7;
        let ctx = PhysicalContext::natural(alpha(a));
        let v =
            Potential::infinite_well(2.0, Some(crate::calculus::RealFunction::new(|x| 0.3 * x)))
                .unwrap();
        let e = 40.0;
        let w = WkbWavefunction::new(
            v.clone(),
            e,
            ctx,
            (0.0, 2.0),
            WkbCoefficients::oscillatory(1.3, 0.0),
            spec,
        )
        .unwrap();
        let phi = |x: f64| phase_integral(&v, e, 0.0, x, &ctx, &spec).unwrap().value;
        let mut products = Vec::new();
        for k in 0..4 {
            let target = (k as f64 + 0.5) * PI;
            let (mut lo, mut hi) = (1e-9, 2.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if phi(mid) < target {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            let x = 0.5 * (lo + hi);
            let psi = wkb_eval(&w, x).unwrap().re;
            let p = (2.0 * (e - v.value(x, &ctx).unwrap())).sqrt();
            products.push(psi * psi * p);
        }
        for q in &products {
            assert_relative_eq!(*q, 1.3 * 1.3, max_relative = 1e-9);
        }
    }

    #[test]
    fn validity_parameter() {
        let ctx = PhysicalContext::natural(AlphaOrder::ONE);
        let flat = Potential::constant(0.0).unwrap();
        assert_eq!(wkb_validity(&flat, 1.0, 0.5, &ctx).unwrap(), 0.0);
        let osc = Potential::damped_oscillator(1.0, 0.0, &ctx).unwrap();
        let near = wkb_validity(&osc, 1.5, 1.7, &ctx).unwrap();
        let far = wkb_validity(&osc, 1.5, 0.3, &ctx).unwrap();
        assert!(near > far);
    }
}
