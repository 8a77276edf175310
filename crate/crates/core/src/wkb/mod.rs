//! Conformable WKB: phase integrals, turning points, quantization rules, the
//! Hamilton-principal-function expansion, wavefunctions and tunneling.

mod phase;
mod quantize;
mod tunneling;
mod wavefunction;
mod waves;

use serde::{Deserialize, Serialize};

pub use phase::{hamilton_principal_terms, phase_integral, turning_points, PhaseIntegral};
pub use quantize::{
    oscillator_energy_closed, quantize_connection, quantize_hard_wall, well_energy_closed,
    SolverConfig,
};
pub use tunneling::{
    gamow_closed, gamow_factor, gamow_thin_barrier, TunnelingResult, THIN_BARRIER_RATIO_LIMIT,
};
pub use wavefunction::{wkb_eval, wkb_validity, WkbCoefficients, WkbWavefunction};
pub use waves::{evanescent_wave, normalized_well_wavefunction, plane_wave, Sign};

/// Where an energy level came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelMethod {
    ClosedForm,
    HardWallSolver,
    ConnectionSolver,
    Oracle,
}

impl std::fmt::Display for LevelMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LevelMethod::ClosedForm => "closed-form",
            LevelMethod::HardWallSolver => "hard-wall-solver",
            LevelMethod::ConnectionSolver => "connection-solver",
            LevelMethod::Oracle => "oracle",
        })
    }
}

/// A bound-state α-energy E^α with quantum number `n`.
///
/// `residual` is the relative mismatch of the quantization condition at the
/// returned energy (zero for closed forms).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub n: usize,
    pub energy: f64,
    pub method: LevelMethod,
    pub residual: f64,
}
