use thiserror::Error;

/// Errors raised by the conformable WKB library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("function evaluation failed at x = {x}: produced {value}")]
    Evaluation { x: f64, value: f64 },

    #[error("quadrature did not converge: estimate {estimate} with error bound {error_bound}")]
    Accuracy { estimate: f64, error_bound: f64 },

    #[error("region error: {0}")]
    Region(String),

    #[error("potential shape error: {0}")]
    Shape(String),

    #[error("no bracket found below E_max = {e_max} for target phase {target}")]
    UnboundedSearch { e_max: f64, target: f64 },

    #[error("energy {energy} is above the barrier top {barrier}")]
    NoBarrier { energy: f64, barrier: f64 },

    #[error("ordering error: {0}")]
    Ordering(String),

    #[error("grid too coarse: {0}; halve the u-spacing")]
    Resolution(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("WKB form is singular at x = {x} (turning-point neighborhood)")]
    Singularity { x: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
