//! Adaptive Gauss–Legendre quadrature.
//!
//! Panels use a 15-point Gauss–Legendre rule. The error of a panel is estimated
//! by comparing the rule on the whole panel with the sum of the rule on its two
//! halves; the panel with the largest estimate is bisected until the summed
//! estimate meets the tolerance. Endpoint square-root zeros (WKB turning points)
//! are integrable and get resolved by repeated bisection of the endpoint panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GL_POINTS: usize = 15;

/// Tolerances for adaptive quadrature.
///
/// `max_subdivisions` bounds the bisection depth of any single panel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 60,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Config(format!(
                "relative tolerance must be positive, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Config(format!(
                "absolute tolerance must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Config("max subdivisions must be at least 1".into()));
        }
        Ok(())
    }
}

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Nodes and weights of the 15-point rule on [-1, 1], computed once by Newton
/// iteration on P_15.
fn gauss_legendre_15() -> &'static ([f64; GL_POINTS], [f64; GL_POINTS]) {
    static RULE: OnceLock<([f64; GL_POINTS], [f64; GL_POINTS])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        let mut nodes = [0.0; GL_POINTS];
        let mut weights = [0.0; GL_POINTS];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel_rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<f64> {
    let (nodes, weights) = gauss_legendre_15();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        let t = mid + half * x;
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::Evaluation { x: t, value: v });
        }
        sum += w * v;
    }
    Ok(sum * half)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    error: f64,
    depth: usize,
}

impl Panel {
    fn evaluate<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        depth: usize,
    ) -> Result<Self> {
        let m = 0.5 * (a + b);
        let left = panel_rule(f, a, m)?;
        let right = panel_rule(f, m, b)?;
        Ok(Self {
            a,
            b,
            left,
            right,
            error: (whole - (left + right)).abs(),
            depth,
        })
    }

    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]` (either orientation) to the tolerances in `spec`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration limits must be finite: [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    if a > b {
        let est = integrate(f, b, a, spec)?;
        return Ok(Estimate {
            value: -est.value,
            error: est.error,
        });
    }

    let whole = panel_rule(&f, a, b)?;
    let mut active = BinaryHeap::new();
    active.push(Panel::evaluate(&f, a, b, whole, 0)?);
    let mut frozen: Vec<Panel> = Vec::new();

    loop {
        let total: f64 = active.iter().chain(frozen.iter()).map(Panel::value).sum();
        let error: f64 = active.iter().chain(frozen.iter()).map(|p| p.error).sum();
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if error <= target {
            return Ok(Estimate {
                value: total,
                error,
            });
        }
        let Some(worst) = active.pop() else {
            return Err(Error::Accuracy {
                estimate: total,
                error_bound: error,
            });
        };
        let m = 0.5 * (worst.a + worst.b);
        if worst.depth >= spec.max_subdivisions || m <= worst.a || m >= worst.b {
            frozen.push(worst);
            continue;
        }
        active.push(Panel::evaluate(
            &f,
            worst.a,
            m,
            worst.left,
            worst.depth + 1,
        )?);
        active.push(Panel::evaluate(
            &f,
            m,
            worst.b,
            worst.right,
            worst.depth + 1,
        )?);
    }
}

/// Complex integrand: real and imaginary parts are integrated independently.
pub fn integrate_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)> {
    let re = integrate(|x| f(x).re, a, b, spec)?;
    let im = integrate(|x| f(x).im, a, b, spec)?;
    Ok((Complex64::new(re.value, im.value), re.error + im.error))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_degree_29() {
        let spec = QuadratureSpec::default();
        let est = integrate(|x| x.powi(29) + x.powi(28), 0.0, 1.0, &spec).unwrap();
        assert!((est.value - (1.0 / 30.0 + 1.0 / 29.0)).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_two() {
        let (_, w) = gauss_legendre_15();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sqrt_endpoint_zero() {
        // quarter circle: ∫_0^1 sqrt(1 - x^2) dx = π/4
        let spec = QuadratureSpec::default();
        let est = integrate(|x: f64| (1.0 - x * x).max(0.0).sqrt(), 0.0, 1.0, &spec).unwrap();
        assert!(
            (est.value - std::f64::consts::FRAC_PI_4).abs() < 1e-10 * std::f64::consts::FRAC_PI_4
        );
        assert!(est.error <= 1e-10 * est.value.abs());
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let spec = QuadratureSpec::default();
        let fwd = integrate(f64::exp, 0.0, 1.0, &spec).unwrap();
        let back = integrate(f64::exp, 1.0, 0.0, &spec).unwrap();
        assert_eq!(fwd.value, -back.value);
    }

    #[test]
    fn nonconvergence_reports_best_estimate() {
        let spec = QuadratureSpec::new(1e-14, 1e-300, 2).unwrap();
        let err = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &spec).unwrap_err();
        match err {
            Error::Accuracy {
                estimate,
                error_bound,
            } => {
                assert!(estimate > 1.5 && estimate < 2.0);
                assert!(error_bound > 0.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_evaluation_error() {
        let spec = QuadratureSpec::default();
        let err = integrate(|_| f64::NAN, 0.0, 1.0, &spec).unwrap_err();
        assert!(matches!(err, Error::Evaluation { .. }));
    }

    #[test]
    fn bad_spec_rejected() {
        assert!(QuadratureSpec::new(0.0, 1e-12, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, -1.0, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-12, 0).is_err());
    }
}
