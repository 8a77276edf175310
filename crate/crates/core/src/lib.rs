//! WKB semiclassical machinery for the conformable (order-α) Schrödinger equation.
//!
//! * [`calculus`]: conformable derivative and integral, the `u = x^α/α`
//!   substitution and the α-weighted inner product.
//! * [`model`]: physical constants, potentials, local momentum, flux.
//! * [`wkb`]: phase integrals, quantization rules, wavefunctions, Gamow factors.
//! * [`oracle`]: Numerov shooting solver for the transformed equation, used as an
//!   independent check on WKB energies.
//! * [`validate`]: the invariant and acceptance checks behind `cwkb validate`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod error;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod validate;
pub mod wkb;

pub use calculus::{AlphaOrder, ComplexFunction, DerivativeMethod, RealFunction};
pub use error::{Error, Result};
pub use model::{PhysicalContext, Potential, RegionTag, UnitSystem};
pub use quadrature::QuadratureSpec;
pub use wkb::{EnergyLevel, LevelMethod, TunnelingResult};
