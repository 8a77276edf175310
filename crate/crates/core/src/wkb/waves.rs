use std::f64::consts::PI;

use num_complex::Complex64;

use crate::calculus::{u_of_x, AlphaOrder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `exp(±i k x^α/α)` for constant potential below the energy.
pub fn plane_wave(x: f64, k: f64, alpha: AlphaOrder, sign: Sign) -> Result<Complex64> {
    let u = u_of_x(x, alpha)?;
    Ok(Complex64::new(0.0, sign.factor() * k * u).exp())
}

/// `exp(±q x^α/α)` for constant potential above the energy.
pub fn evanescent_wave(x: f64, q: f64, alpha: AlphaOrder, sign: Sign) -> Result<f64> {
    let u = u_of_x(x, alpha)?;
    Ok((sign.factor() * q * u).exp())
}

/// Normalized hard-wall eigenfunction `√(2α/L^α) sin(nπ x^α/L^α)`; zero outside `[0, L]`.
pub fn normalized_well_wavefunction(
    n: usize,
    x: f64,
    alpha: AlphaOrder,
    length: f64,
) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("well quantum number starts at 1".into()));
    }
    if !(length > 0.0) {
        return Err(Error::Domain(format!(
            "well width must be positive, got {length}"
        )));
    }
    if !(0.0..=length).contains(&x) {
        return Ok(0.0);
    }
    let a = alpha.value();
    let la = length.powf(a);
    Ok((2.0 * a / la).sqrt() * (n as f64 * PI * x.powf(a) / la).sin())
}
