//! One function per subcommand, each producing a table.

use std::f64::consts::PI;

use anyhow::{Context, Result};
use conformable_wkb::model::RegionTag;
use conformable_wkb::oracle::{solve_bound_states, transform_default, OracleEigenpair};
use conformable_wkb::validate::{self, ValidationOptions};
use conformable_wkb::wkb::{
    gamow_closed, gamow_factor, gamow_thin_barrier, oscillator_energy_closed, quantize_connection,
    quantize_hard_wall, well_energy_closed, wkb_eval, wkb_validity, WkbCoefficients,
    WkbWavefunction, THIN_BARRIER_RATIO_LIMIT,
};
use conformable_wkb::{Error, PhysicalContext, Potential, TunnelingResult};

use crate::config::{CommandConfig, RunConfig, Units, WavePotential};
use crate::inner::InnerTable;
use crate::table::{Cell, Table};

/// De Broglie criterion above which the WKB form is flagged as unreliable.
const VALIDITY_WARNING: f64 = 0.1;

/// A finished table plus whether any reported check failed.
pub struct Outcome {
    pub table: Table,
    pub failed: bool,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Self {
            table,
            failed: false,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let ctx = cfg.context()?;
    match &cfg.command {
        CommandConfig::Well {
            length,
            n_max,
            inner_potential,
        } => well(cfg, &ctx, *length, *n_max, inner_potential.as_deref()).map(Outcome::from),
        CommandConfig::Oscillator {
            omega,
            lambda,
            n_max,
        } => oscillator(cfg, &ctx, *omega, *lambda, *n_max).map(Outcome::from),
        CommandConfig::Decay { z, energy, r1 } => {
            decay(cfg, &ctx, *z, *energy, *r1).map(Outcome::from)
        }
        CommandConfig::Wavefunction { .. } => wavefunction(cfg, &ctx).map(Outcome::from),
        CommandConfig::Validate {
            scope,
            closed_form_perturbation,
        } => Ok(validation(*scope, *closed_form_perturbation)),
    }
}

fn rel(a: Option<f64>, b: Option<f64>) -> Cell {
    match (a, b) {
        (Some(a), Some(b)) => Cell::num((a - b).abs() / b.abs()),
        _ => Cell::Missing,
    }
}

fn warn(context: &str, err: &Error) {
    eprintln!("warning: {context}: {err}");
}

/// Oracle energies by quantum number, or `None` if the oracle could not run.
fn oracle_energies(
    v: &Potential,
    ctx: &PhysicalContext,
    n_max: usize,
    cfg: &RunConfig,
) -> Vec<Option<f64>> {
    let solved = cfg
        .tolerances
        .oracle()
        .map_err(|e| Error::Config(e.to_string()))
        .and_then(|ocfg| solve_bound_states(&transform_default(v, ctx)?, n_max, &ocfg));
    match solved {
        Ok(states) => (0..=n_max)
            .map(|n| {
                states
                    .iter()
                    .find(|s| s.n == n)
                    .map(|s: &OracleEigenpair| s.energy)
            })
            .collect(),
        Err(e) => {
            warn("oracle", &e);
            vec![None; n_max + 1]
        }
    }
}

fn energy_columns() -> Vec<&'static str> {
    vec![
        "n",
        "closed_form",
        "wkb_solver",
        "oracle",
        "rel_wkb_closed",
        "rel_oracle_closed",
        "rel_oracle_wkb",
        "residual",
        "valid",
    ]
}

fn energy_row(
    n: usize,
    closed: Option<f64>,
    wkb: Option<f64>,
    oracle: Option<f64>,
    residual: Option<f64>,
) -> Vec<Cell> {
    vec![
        Cell::Int(n as u64),
        Cell::opt(closed),
        Cell::opt(wkb),
        Cell::opt(oracle),
        rel(wkb, closed),
        rel(oracle, closed),
        rel(oracle, wkb),
        Cell::opt(residual),
        Cell::Bool(wkb.is_some() && oracle.is_some()),
    ]
}

fn well(
    cfg: &RunConfig,
    ctx: &PhysicalContext,
    length: f64,
    n_max: usize,
    inner: Option<&std::path::Path>,
) -> Result<Table> {
    let solver = cfg.tolerances.solver()?;
    let inner_fn = match inner {
        Some(path) => {
            let table = InnerTable::from_path(path)?;
            table.check_covers(length)?;
            Some(table.into_function())
        }
        None => None,
    };
    let has_inner = inner_fn.is_some();
    let v = Potential::infinite_well(length, inner_fn)?;
    let oracle = oracle_energies(&v, ctx, n_max - 1, cfg);
    let mut table = Table::new(energy_columns());
    let mut worst_validity = 0.0f64;
    for n in 1..=n_max {
        // closed form holds for a flat floor only
        let closed = (!has_inner).then(|| well_energy_closed(n, length, ctx).energy);
        let level = quantize_hard_wall(&v, n, ctx, &solver);
        let (wkb, residual) = match level {
            Ok(l) => (Some(l.energy), Some(l.residual)),
            Err(e) => {
                warn(&format!("hard-wall solver, n = {n}"), &e);
                (None, None)
            }
        };
        if let (true, Some(e)) = (has_inner, wkb) {
            for i in 1..200 {
                let x = length * i as f64 / 200.0;
                if let Ok(q) = wkb_validity(&v, e, x, ctx) {
                    if q.is_finite() {
                        worst_validity = worst_validity.max(q);
                    }
                }
            }
        }
        table.push(energy_row(n, closed, wkb, oracle[n - 1], residual));
    }
    if worst_validity > VALIDITY_WARNING {
        eprintln!(
            "warning: inner potential is not slowly varying (de Broglie criterion reaches {worst_validity:.3} > {VALIDITY_WARNING})"
        );
    }
    Ok(table)
}

fn oscillator(
    cfg: &RunConfig,
    ctx: &PhysicalContext,
    omega: f64,
    lambda: f64,
    n_max: usize,
) -> Result<Table> {
    let solver = cfg.tolerances.solver()?;
    let v = Potential::damped_oscillator(omega, lambda, ctx)?;
    let oracle = oracle_energies(&v, ctx, n_max, cfg);
    let mut table = Table::new(energy_columns());
    for (n, oracle_energy) in oracle.into_iter().enumerate() {
        let closed = oscillator_energy_closed(n, omega, lambda, ctx).energy;
        let (wkb, residual) = match quantize_connection(&v, n, ctx, &solver) {
            Ok(l) => (Some(l.energy), Some(l.residual)),
            Err(e) => {
                warn(&format!("connection solver, n = {n}"), &e);
                (None, None)
            }
        };
        table.push(energy_row(n, Some(closed), wkb, oracle_energy, residual));
    }
    Ok(table)
}

fn decay(cfg: &RunConfig, ctx: &PhysicalContext, z: f64, energy: f64, r1: f64) -> Result<Table> {
    let spec = cfg.tolerances.quadrature()?;
    let alpha = ctx.alpha();
    let e_alpha = energy.powf(alpha.value());
    let v = Potential::coulomb_barrier(z, r1, ctx)?;
    let quad = gamow_factor(&v, e_alpha, ctx, &spec).context("Gamow quadrature")?;
    let closed = gamow_closed(e_alpha, quad.r1, quad.r2, ctx)?;
    let thin = match cfg.units {
        Units::Nuclear => Some(gamow_thin_barrier(e_alpha, z, r1, ctx)?),
        Units::Natural => None,
    };
    let mut table = Table::new(vec![
        "method",
        "gamma",
        "transmission",
        "r1",
        "r2",
        "radius_ratio",
        "rel_to_closed",
        "thin_barrier_valid",
    ]);
    let row = |method: &str, t: Option<&TunnelingResult>, flag: Cell| -> Vec<Cell> {
        vec![
            Cell::Text(method.to_string()),
            Cell::opt(t.map(|t| t.gamma)),
            Cell::opt(t.map(|t| t.transmission)),
            Cell::num(quad.r1),
            Cell::num(quad.r2),
            Cell::num(quad.radius_ratio(alpha)),
            rel(t.map(|t| t.gamma), Some(closed.gamma)),
            flag,
        ]
    };
    table.push(row("quadrature", Some(&quad), Cell::Missing));
    table.push(row("closed-form", Some(&closed), Cell::Missing));
    let thin_valid = thin.is_some() && quad.radius_ratio(alpha) <= THIN_BARRIER_RATIO_LIMIT;
    table.push(row("thin-barrier", thin.as_ref(), Cell::Bool(thin_valid)));
    Ok(table)
}

fn wavefunction(cfg: &RunConfig, ctx: &PhysicalContext) -> Result<Table> {
    let CommandConfig::Wavefunction {
        potential,
        length,
        omega,
        lambda,
        n,
        energy,
        x_min,
        x_max,
        points,
    } = &cfg.command
    else {
        unreachable!("dispatched on the wavefunction command")
    };
    let solver = cfg.tolerances.solver()?;
    let spec = cfg.tolerances.quadrature()?;
    let a = ctx.alpha().value();
    let m = ctx.mass_alpha();
    let (v, e, coeffs, default_max) = match potential {
        WavePotential::Well => {
            let v = Potential::infinite_well(*length, None)?;
            let e = match n {
                Some(n) => quantize_hard_wall(&v, *n, ctx, &solver)?.energy,
                None => energy.expect("validated"),
            };
            let p = (2.0 * m * e).sqrt();
            let c1 = (2.0 * a * p / length.powf(a)).sqrt();
            (v, e, WkbCoefficients::oscillatory(c1, 0.0), *length)
        }
        WavePotential::Oscillator => {
            let v = Potential::damped_oscillator(*omega, *lambda, ctx)?;
            let (e, k) = match n {
                Some(n) => (quantize_connection(&v, *n, ctx, &solver)?.energy, *n),
                None => (energy.expect("validated"), 0),
            };
            // cos(φ + kπ/2) inside, (−1)^k/2 · e^{−∫κ} outside
            let half_turn = k as f64 * PI / 2.0;
            let coeffs = WkbCoefficients {
                c1: -half_turn.sin(),
                c2: half_turn.cos(),
                decaying: if k % 2 == 0 { 0.5 } else { -0.5 },
                growing: 0.0,
            };
            let w2 = v.effective_frequency_sq(ctx.alpha());
            let turning = (2.0 * e / (m * w2)).powf(0.5 / a);
            (v, e, coeffs, 1.5 * turning)
        }
    };
    let lo = x_min.unwrap_or(0.0);
    let hi = x_max.unwrap_or(default_max);
    let w = WkbWavefunction::new(v.clone(), e, *ctx, (lo, hi), coeffs, spec)?;
    let mut table = Table::new(vec!["x", "psi", "psi_sq", "region", "valid"]);
    for i in 0..*points {
        let x = lo + (hi - lo) * i as f64 / (*points - 1) as f64;
        let (psi, region) = if x == 0.0 {
            match potential {
                // ψ vanishes at the wall
                WavePotential::Well => (Ok(0.0), RegionTag::Classical),
                // the phase origin: φ = 0
                WavePotential::Oscillator => (
                    Ok(coeffs.c2 / (2.0 * m * e).sqrt().sqrt()),
                    RegionTag::Classical,
                ),
            }
        } else {
            let region = w.region_at(x)?;
            (wkb_eval(&w, x).map(|c| c.re), region)
        };
        let row = match psi {
            Ok(psi) => vec![
                Cell::num(x),
                Cell::num(psi),
                Cell::num(psi * psi),
                Cell::Text(region.to_string()),
                Cell::Bool(true),
            ],
            Err(Error::Singularity { .. }) => vec![
                Cell::num(x),
                Cell::Missing,
                Cell::Missing,
                Cell::Text(RegionTag::TurningPoint.to_string()),
                Cell::Bool(false),
            ],
            Err(other) => return Err(other.into()),
        };
        table.push(row);
    }
    Ok(table)
}

fn validation(scope: validate::Scope, perturbation: f64) -> Outcome {
    let opts = ValidationOptions {
        closed_form_perturbation: perturbation,
    };
    let reports = validate::run(scope, &opts);
    let mut table = Table::new(vec![
        "check",
        "scope",
        "measured",
        "threshold",
        "passed",
        "detail",
    ]);
    for r in &reports {
        table.push(vec![
            Cell::Text(r.name.clone()),
            Cell::Text(r.scope.to_string()),
            Cell::num(r.measured),
            Cell::num(r.threshold),
            Cell::Bool(r.passed),
            r.detail.clone().map_or(Cell::Missing, Cell::Text),
        ]);
    }
    Outcome {
        failed: !validate::all_passed(&reports),
        table,
    }
}
