//! Conformable derivative and integral, the `u = x^α/α` substitution, and the
//! α-weighted inner product.
//!
//! All calculus lives on the positive half-line. The conformable integral is
//! evaluated in the variable `u = x^α/α`, where `du = x^{α-1} dx`, so the weight
//! disappears and only ordinary quadrature remains.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, Estimate, QuadratureSpec};

/// Order of the conformable derivative, `0 < α ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AlphaOrder(f64);

impl AlphaOrder {
    pub const ONE: AlphaOrder = AlphaOrder(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::Config(format!(
                "alpha must lie in (0, 1], got {value}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for AlphaOrder {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        AlphaOrder::new(value)
    }
}

impl From<AlphaOrder> for f64 {
    fn from(a: AlphaOrder) -> f64 {
        a.0
    }
}

impl fmt::Display for AlphaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ComplexFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A real function on a positive interval, optionally carrying its ordinary
/// derivative.
#[derive(Clone)]
pub struct RealFunction {
    f: RealFn,
    df: Option<RealFn>,
    domain: (f64, f64),
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("domain", &self.domain)
            .field("analytic_derivative", &self.df.is_some())
            .finish()
    }
}

impl RealFunction {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            df: None,
            domain: (0.0, f64::INFINITY),
        }
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.df = Some(Arc::new(df));
        self
    }

    pub fn on_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn has_derivative(&self) -> bool {
        self.df.is_some()
    }

    /// Evaluates without domain or finiteness checks.
    #[inline]
    pub fn raw(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x < self.domain.0 || x > self.domain.1 {
            return Err(Error::Domain(format!(
                "x = {x} outside function domain [{}, {}]",
                self.domain.0, self.domain.1
            )));
        }
        let v = (self.f)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { x, value: v })
        }
    }

    pub fn analytic_derivative(&self, x: f64) -> Option<f64> {
        self.df.as_ref().map(|df| df(x))
    }
}

/// Complex-valued counterpart of [`RealFunction`]. Real machinery is applied to
/// the real and imaginary parts independently.
#[derive(Clone)]
pub struct ComplexFunction {
    f: ComplexFn,
    domain: (f64, f64),
}

impl fmt::Debug for ComplexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexFunction")
            .field("domain", &self.domain)
            .finish()
    }
}

impl ComplexFunction {
    pub fn new(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            domain: (0.0, f64::INFINITY),
        }
    }

    pub fn on_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    #[inline]
    pub fn raw(&self, x: f64) -> Complex64 {
        (self.f)(x)
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        let v = (self.f)(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { x, value: f64::NAN })
        }
    }

    pub fn re(&self) -> RealFunction {
        let f = self.f.clone();
        RealFunction::new(move |x| f(x).re).on_domain(self.domain.0, self.domain.1)
    }

    pub fn im(&self) -> RealFunction {
        let f = self.f.clone();
        RealFunction::new(move |x| f(x).im).on_domain(self.domain.0, self.domain.1)
    }
}

impl From<RealFunction> for ComplexFunction {
    fn from(r: RealFunction) -> Self {
        let domain = r.domain;
        ComplexFunction::new(move |x| Complex64::new(r.raw(x), 0.0)).on_domain(domain.0, domain.1)
    }
}

/// How the conformable derivative is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMethod {
    /// Difference quotient of the defining limit, Richardson-extrapolated to ε → 0.
    Limit,
    /// `x^{1-α} f'(x)`.
    ChainIdentity,
}

fn require_positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} must be positive and finite, got {x}"
        )))
    }
}

/// Ordinary first derivative: analytic channel if present, otherwise a central
/// difference with step `ε_mach^{1/3}·max(x, 1)`.
pub fn ordinary_derivative(f: &RealFunction, x: f64) -> Result<f64> {
    if let Some(d) = f.analytic_derivative(x) {
        return if d.is_finite() {
            Ok(d)
        } else {
            Err(Error::Evaluation { x, value: d })
        };
    }
    let (lo, hi) = f.domain();
    let mut h = f64::EPSILON.cbrt() * x.abs().max(1.0);
    // keep both stencil points inside the domain
    h = h.min(0.5 * (x - lo)).min(0.5 * (hi - x));
    if !(h > 0.0) {
        return Err(Error::Domain(format!(
            "no room for a difference stencil at x = {x}"
        )));
    }
    let fp = f.eval(x + h)?;
    let fm = f.eval(x - h)?;
    Ok((fp - fm) / (2.0 * h))
}

/// Conformable derivative `T_α(f)(x)`.
pub fn conf_derivative(
    f: &RealFunction,
    x: f64,
    alpha: AlphaOrder,
    method: DerivativeMethod,
) -> Result<f64> {
    require_positive(x, "x")?;
    let a = alpha.value();
    match method {
        DerivativeMethod::ChainIdentity => Ok(x.powf(1.0 - a) * ordinary_derivative(f, x)?),
        DerivativeMethod::Limit => {
            let f0 = f.eval(x)?;
            let scale = x.powf(a);
            let shift = x.powf(1.0 - a);
            let eps = [1e-2 * scale, 1e-3 * scale, 1e-4 * scale];
            let mut quotients = [0.0; 3];
            for (q, &e) in quotients.iter_mut().zip(eps.iter()) {
                *q = (f.eval(x + e * shift)? - f0) / e;
            }
            Ok(neville_at_zero(&eps, &quotients))
        }
    }
}

/// Complex conformable derivative, part by part.
pub fn conf_derivative_complex(
    f: &ComplexFunction,
    x: f64,
    alpha: AlphaOrder,
    method: DerivativeMethod,
) -> Result<Complex64> {
    let re = conf_derivative(&f.re(), x, alpha, method)?;
    let im = conf_derivative(&f.im(), x, alpha, method)?;
    Ok(Complex64::new(re, im))
}

/// Polynomial extrapolation of `(xs[i], ys[i])` to x = 0.
fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// `u = x^α / α`.
pub fn u_of_x(x: f64, alpha: AlphaOrder) -> Result<f64> {
    require_positive(x, "x")?;
    let a = alpha.value();
    Ok(x.powf(a) / a)
}

/// `x = (αu)^{1/α}`, inverse of [`u_of_x`].
pub fn x_of_u(u: f64, alpha: AlphaOrder) -> Result<f64> {
    require_positive(u, "u")?;
    let a = alpha.value();
    Ok((a * u).powf(1.0 / a))
}

// Endpoint-tolerant versions used internally (x = 0 maps to u = 0).
#[inline]
pub(crate) fn u_at(x: f64, a: f64) -> f64 {
    if a == 1.0 {
        x
    } else {
        x.powf(a) / a
    }
}

#[inline]
pub(crate) fn x_at(u: f64, a: f64) -> f64 {
    if a == 1.0 {
        u
    } else {
        (a * u).powf(1.0 / a)
    }
}

fn check_limits(a: f64, b: f64) -> Result<()> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!(
            "lower limit must be nonnegative, got {a}"
        )));
    }
    if !(b > a && b.is_finite()) {
        return Err(Error::Domain(format!("need 0 <= a < b, got [{a}, {b}]")));
    }
    Ok(())
}

/// Conformable integral `∫_a^b f(x) x^{α-1} dx`, evaluated as `∫ f(x(u)) du`.
pub fn conf_integral(
    f: &RealFunction,
    a: f64,
    b: f64,
    alpha: AlphaOrder,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    check_limits(a, b)?;
    conf_integral_fn(|x| f.raw(x), a, b, alpha, spec)
}

/// Closure form of [`conf_integral`] for internal callers.
pub(crate) fn conf_integral_fn<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    alpha: AlphaOrder,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let al = alpha.value();
    quadrature::integrate(|u| f(x_at(u, al)), u_at(a, al), u_at(b, al), spec)
}

/// `⟨f|g⟩ = ∫ g*(x) f(x) x^{α-1} dx` over `[a, b]`, `0 ≤ a < b`.
pub fn inner_product(
    f: &ComplexFunction,
    g: &ComplexFunction,
    domain: (f64, f64),
    alpha: AlphaOrder,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let (a, b) = domain;
    check_limits(a, b)?;
    let al = alpha.value();
    let (v, _) = quadrature::integrate_complex(
        |u| {
            let x = x_at(u, al);
            g.raw(x).conj() * f.raw(x)
        },
        u_at(a, al),
        u_at(b, al),
        spec,
    )?;
    Ok(v)
}

/// `⟨A⟩ = ∫ ψ* (Aψ) x^{α-1} dx`, where `applied` is `Aψ`.
pub fn expectation(
    psi: &ComplexFunction,
    applied: &ComplexFunction,
    domain: (f64, f64),
    alpha: AlphaOrder,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    inner_product(applied, psi, domain, alpha, spec)
}

/// `([x̂, p̂]ψ)(x) − iℏ x^{1-α} ψ(x)` with `p̂ = −iℏ D^α`, where `hbar` is ℏ_α^α.
/// Vanishes up to differencing error for smooth ψ.
pub fn commutator_residual(
    psi: &ComplexFunction,
    x: f64,
    alpha: AlphaOrder,
    hbar: f64,
) -> Result<Complex64> {
    require_positive(x, "x")?;
    let i_hbar = Complex64::new(0.0, hbar);
    let method = DerivativeMethod::ChainIdentity;
    let d_psi = conf_derivative_complex(psi, x, alpha, method)?;
    let psi_c = psi.clone();
    let x_psi =
        ComplexFunction::new(move |t| t * psi_c.raw(t)).on_domain(psi.domain.0, psi.domain.1);
    let d_x_psi = conf_derivative_complex(&x_psi, x, alpha, method)?;
    let xp = x * (-i_hbar * d_psi);
    let px = -i_hbar * d_x_psi;
    let expected = i_hbar * x.powf(1.0 - alpha.value()) * psi.eval(x)?;
    Ok(xp - px - expected)
}
