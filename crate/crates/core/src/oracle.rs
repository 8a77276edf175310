//! Independent eigenvalue oracle.
//!
//! With `u = x^α/α` the conformable derivative becomes `d/du` exactly, so the
//! conformable Schrödinger equation turns into the ordinary one
//!
//! ```text
//! −((ℏ_α^α)²/2m^α) ψ''(u) + W(u) ψ = E^α ψ,   W(u) = V_α(x(u)),
//! ```
//!
//! which is solved here by Numerov integration and node-count (Sturm) bisection
//! on the energy. Nothing in this module uses the WKB phase integral.

use crate::calculus::{u_at, x_at, AlphaOrder};
use crate::error::{Error, Result};
use crate::model::{PhysicalContext, Potential};

/// Boundary condition at the left end of the u-grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LeftEdge {
    Dirichlet,
    /// ψ'(0) = 0 (even states of a symmetric potential).
    Even,
    /// ψ(0) = 0 (odd states of a symmetric potential).
    Odd,
}

/// Oracle settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Grid points across the solved u-interval (half-line for symmetric potentials).
    pub points: usize,
    /// Relative width at which energy bisection stops.
    pub rel_tol: f64,
    /// `∫κ du` of forbidden-region padding past the outermost turning point.
    pub decay_padding: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            points: 20_001,
            rel_tol: 1e-8,
            decay_padding: 25.0,
        }
    }
}

/// The conformable problem rewritten in `u`.
#[derive(Debug, Clone)]
pub struct TransformedProblem {
    potential: Potential,
    ctx: PhysicalContext,
    /// Image of the x-domain; the right end may be infinite for confining potentials.
    u_range: (f64, f64),
    symmetric: bool,
}

impl TransformedProblem {
    pub fn u_range(&self) -> (f64, f64) {
        self.u_range
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn alpha(&self) -> AlphaOrder {
        self.ctx.alpha()
    }

    /// `W(u) = V_α(x(u))`.
    pub fn effective_potential(&self, u: f64) -> Result<f64> {
        let a = self.ctx.alpha().value();
        // the substitution maps u = 0 to x = 0; evaluate at the first positive point there
        let x = x_at(u.max(f64::MIN_POSITIVE), a);
        self.potential.value(x.max(f64::MIN_POSITIVE), &self.ctx)
    }
}

/// Maps `V` on the x-interval `domain` to the u-problem.
pub fn transform(
    v: &Potential,
    ctx: &PhysicalContext,
    domain: (f64, f64),
) -> Result<TransformedProblem> {
    let (a, b) = domain;
    if !(a >= 0.0 && b > a) {
        return Err(Error::Domain(format!(
            "x-domain must satisfy 0 <= a < b, got {domain:?}"
        )));
    }
    match v {
        Potential::InfiniteWell { length, .. } if b > *length => {
            return Err(Error::Domain(format!(
                "x-domain {domain:?} extends past the wall at {length}"
            )));
        }
        Potential::Constant { .. } | Potential::CoulombBarrier { .. } => {
            return Err(Error::Shape(format!(
                "{} has no bound states to solve for",
                v.name()
            )));
        }
        Potential::DampedOscillator { .. } if a != 0.0 => {
            return Err(Error::Domain(
                "symmetric potentials are solved on [0, ∞) with parity".into(),
            ));
        }
        Potential::Custom { domain: d, .. } if a < d.0 || b > d.1 => {
            return Err(Error::Domain(format!(
                "x-domain {domain:?} outside custom domain {d:?}"
            )));
        }
        _ => {}
    }
    let al = ctx.alpha().value();
    let ub = if b.is_finite() {
        u_at(b, al)
    } else {
        f64::INFINITY
    };
    Ok(TransformedProblem {
        potential: v.clone(),
        ctx: *ctx,
        u_range: (u_at(a, al), ub),
        symmetric: v.is_symmetric(),
    })
}

/// Transform on the model's natural domain.
pub fn transform_default(v: &Potential, ctx: &PhysicalContext) -> Result<TransformedProblem> {
    transform(v, ctx, v.domain())
}

/// An eigenpair of the transformed problem.
///
/// `psi` holds samples on the uniform grid `u`, normalized so the trapezoid sum
/// of |ψ|² du is 1. Symmetric problems are reflected onto the full line.
#[derive(Debug, Clone)]
pub struct OracleEigenpair {
    pub n: usize,
    pub energy: f64,
    pub u: Vec<f64>,
    pub psi: Vec<f64>,
    alpha: AlphaOrder,
}

impl OracleEigenpair {
    pub fn nodes(&self) -> usize {
        node_count(&self.psi)
    }

    pub fn spacing(&self) -> f64 {
        self.u[1] - self.u[0]
    }

    /// Trapezoid norm Σ|ψ|²Δu.
    pub fn norm_sq(&self) -> f64 {
        trapezoid_product(&self.psi, &self.psi, self.spacing())
    }

    /// Trapezoid overlap with another eigenpair on the same grid.
    pub fn overlap(&self, other: &OracleEigenpair) -> Result<f64> {
        if self.u.len() != other.u.len()
            || self.u[0] != other.u[0]
            || self.spacing() != other.spacing()
        {
            return Err(Error::Domain("eigenpairs live on different grids".into()));
        }
        Ok(trapezoid_product(&self.psi, &other.psi, self.spacing()))
    }

    /// Cubic interpolation of ψ at `u`; zero outside the grid.
    pub fn eval_u(&self, u: f64) -> f64 {
        let n = self.u.len();
        let (u0, h) = (self.u[0], self.spacing());
        let t = (u - u0) / h;
        if !(t >= 0.0 && t <= (n - 1) as f64) {
            return 0.0;
        }
        let i = (t.floor() as usize).clamp(1, n - 3);
        let s = t - i as f64;
        let (p0, p1, p2, p3) = (
            self.psi[i - 1],
            self.psi[i],
            self.psi[i + 1],
            self.psi[i + 2],
        );
        // Lagrange cubic through i-1, i, i+1, i+2
        let l0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let l1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        let l2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        let l3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        p0 * l0 + p1 * l1 + p2 * l2 + p3 * l3
    }

    /// ψ as a function of x > 0.
    pub fn eval_x(&self, x: f64) -> f64 {
        self.eval_u(u_at(x, self.alpha.value()))
    }
}

fn trapezoid_product(a: &[f64], b: &[f64], h: f64) -> f64 {
    let n = a.len();
    let inner: f64 = (1..n - 1).map(|i| a[i] * b[i]).sum();
    h * (inner + 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]))
}

/// Strict sign changes, ignoring samples below `1e-12·max|ψ|`.
pub fn node_count(samples: &[f64]) -> usize {
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return 0;
    }
    let floor = 1e-12 * peak;
    let mut count = 0;
    let mut last_sign = 0i8;
    for &v in samples {
        if v.abs() < floor {
            continue;
        }
        let s = if v > 0.0 { 1 } else { -1 };
        if last_sign != 0 && s != last_sign {
            count += 1;
        }
        last_sign = s;
    }
    count
}

/// A fixed uniform grid with W sampled on it.
struct Grid {
    u0: f64,
    h: f64,
    w: Vec<f64>,
    /// 2m^α/(ℏ_α^α)²
    scale: f64,
    left: LeftEdge,
}

impl Grid {
    fn build(
        problem: &TransformedProblem,
        upper: f64,
        points: usize,
        left: LeftEdge,
    ) -> Result<Self> {
        let (u0, _) = problem.u_range;
        if !(upper > u0) || points < 8 {
            return Err(Error::Resolution(format!(
                "degenerate grid [{u0}, {upper}] with {points} points"
            )));
        }
        let h = (upper - u0) / (points - 1) as f64;
        let w = (0..points)
            .map(|i| {
                let u = u0 + h * i as f64;
                if i == 0 && problem.potential.is_symmetric() {
                    return Ok(0.0f64.max(problem.effective_potential(u)?));
                }
                problem.effective_potential(u)
            })
            .collect::<Result<Vec<_>>>()?;
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(
                "effective potential is not finite on the grid".into(),
            ));
        }
        let hb = problem.ctx.hbar_alpha();
        Ok(Self {
            u0,
            h,
            w,
            scale: 2.0 * problem.ctx.mass_alpha() / (hb * hb),
            left,
        })
    }

    fn len(&self) -> usize {
        self.w.len()
    }

    /// Numerov sweep from the left edge; returns the samples and the interior zero count.
    fn shoot(&self, energy: f64, keep: bool) -> (Vec<f64>, usize) {
        let n = self.len();
        let h2 = self.h * self.h / 12.0;
        let k = |i: usize| self.scale * (self.w[i] - energy);
        let mut out = if keep {
            Vec::with_capacity(n)
        } else {
            Vec::new()
        };
        let (y0, y1) = match self.left {
            LeftEdge::Dirichlet | LeftEdge::Odd => (0.0, self.h),
            LeftEdge::Even => {
                let y0 = 1.0;
                (y0, (1.0 + 5.0 * h2 * k(0)) * y0 / (1.0 - h2 * k(1)))
            }
        };
        let mut prev = y0;
        let mut cur = y1;
        if keep {
            out.push(prev);
            out.push(cur);
        }
        let mut zeros = 0;
        if prev != 0.0 && (prev > 0.0) != (cur > 0.0) {
            zeros += 1;
        }
        let mut k_prev = k(0);
        let mut k_cur = k(1);
        for i in 1..n - 1 {
            let k_next = k(i + 1);
            let mut next = (2.0 * (1.0 + 5.0 * h2 * k_cur) * cur - (1.0 - h2 * k_prev) * prev)
                / (1.0 - h2 * k_next);
            if cur != 0.0 && next != 0.0 && (cur > 0.0) != (next > 0.0) && i + 1 < n {
                zeros += 1;
            }
            // rescale growing solutions; sign pattern is unchanged
            if next.abs() > 1e150 && !keep {
                next *= 1e-150;
                cur *= 1e-150;
            }
            if keep {
                out.push(next);
            }
            prev = cur;
            cur = next;
            k_prev = k_cur;
            k_cur = k_next;
        }
        (out, zeros)
    }

    /// States strictly below `energy` (Sturm count for this boundary condition).
    fn count_below(&self, energy: f64) -> usize {
        self.shoot(energy, false).1
    }

    /// Numerov sweep from the right end inward with ψ = 0 there.
    fn shoot_inward(&self, energy: f64, stop: usize) -> Vec<f64> {
        let n = self.len();
        let h2 = self.h * self.h / 12.0;
        let k = |i: usize| self.scale * (self.w[i] - energy);
        let mut out = vec![0.0; n];
        out[n - 1] = 0.0;
        out[n - 2] = self.h;
        for i in (stop + 1..n - 1).rev() {
            out[i - 1] = (2.0 * (1.0 + 5.0 * h2 * k(i)) * out[i]
                - (1.0 - h2 * k(i + 1)) * out[i + 1])
                / (1.0 - h2 * k(i - 1));
        }
        out
    }

    /// Eigenfunction at a converged energy: outward and inward sweeps spliced
    /// at the outermost classical turning point.
    fn eigenfunction(&self, energy: f64) -> Vec<f64> {
        let (mut psi, _) = self.shoot(energy, true);
        let n = self.len();
        let turning = (0..n).rev().find(|&i| self.w[i] < energy).unwrap_or(n - 1);
        if turning + 3 < n {
            let inward = self.shoot_inward(energy, turning);
            let scale = psi[turning] / inward[turning];
            if scale.is_finite() && inward[turning] != 0.0 {
                for i in turning..n {
                    psi[i] = inward[i] * scale;
                }
            }
        }
        psi[n - 1] = 0.0;
        psi
    }
}

/// Upper u-cutoff for a problem whose right side is unbounded.
fn cutoff(problem: &TransformedProblem, energy: f64, padding: f64) -> Result<f64> {
    let (u0, ub) = problem.u_range;
    if ub.is_finite() {
        return Ok(ub);
    }
    let hb = problem.ctx.hbar_alpha();
    let m2 = 2.0 * problem.ctx.mass_alpha();
    // outermost turning point by doubling
    let mut u = u0.max(1e-300) + 1.0;
    let mut found = false;
    for _ in 0..2000 {
        if problem.effective_potential(u)? > energy {
            found = true;
            break;
        }
        u *= 2.0;
    }
    if !found {
        return Err(Error::Shape(
            "potential does not confine the requested energy".into(),
        ));
    }
    let (mut lo, mut hi) = (u0, u);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if problem.effective_potential(mid)? > energy {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let u_turn = hi;
    // march until ∫κ du reaches the padding target
    let mut step = (u_turn - u0).max(1e-6 * u_turn.abs().max(1.0)) / 200.0;
    let mut acc = 0.0;
    let mut x = u_turn;
    let mut iters = 0;
    while acc < padding {
        let kappa = (m2 * (problem.effective_potential(x + step)? - energy).max(0.0)).sqrt() / hb;
        acc += kappa * step;
        x += step;
        iters += 1;
        if iters % 200 == 0 {
            step *= 2.0;
        }
        if iters > 100_000 {
            return Err(Error::Shape(
                "forbidden region never reaches the decay padding".into(),
            ));
        }
    }
    Ok(x)
}

fn parity_edges(problem: &TransformedProblem) -> Vec<LeftEdge> {
    if problem.symmetric {
        vec![LeftEdge::Even, LeftEdge::Odd]
    } else {
        vec![LeftEdge::Dirichlet]
    }
}

/// Bound states with node counts `0..=n_max`, by Numerov shooting and
/// node-count bisection to relative width `cfg.rel_tol`.
pub fn solve_bound_states(
    problem: &TransformedProblem,
    n_max: usize,
    cfg: &OracleConfig,
) -> Result<Vec<OracleEigenpair>> {
    let w_min = {
        let (u0, ub) = problem.u_range;
        let probe_hi = if ub.is_finite() { ub } else { u0 + 1.0 };
        let mut m = f64::INFINITY;
        for i in 0..=256 {
            let u = u0 + (probe_hi - u0) * i as f64 / 256.0;
            m = m.min(problem.effective_potential(u.max(f64::MIN_POSITIVE))?);
        }
        m
    };
    // (boundary condition, highest state index within that parity class)
    let classes: Vec<(LeftEdge, usize)> = parity_edges(problem)
        .into_iter()
        .filter_map(|edge| match (problem.symmetric, edge) {
            (false, _) => Some((edge, n_max)),
            (true, LeftEdge::Even) => Some((edge, n_max / 2)),
            (true, _) => (n_max > 0).then(|| (edge, (n_max - 1) / 2)),
        })
        .collect();
    let mut e_top = f64::NEG_INFINITY;
    for &(edge, k_max) in &classes {
        e_top = e_top.max(bracket_grid(problem, edge, k_max, w_min, cfg)?.1);
    }
    // every parity class shares one grid so eigenfunctions can be compared directly
    let upper = cutoff(problem, e_top, cfg.decay_padding)?;
    let mut states: Vec<(usize, f64, Samples)> = Vec::new();
    for &(edge, k_max) in &classes {
        let grid = Grid::build(problem, upper, cfg.points, edge)?;
        let e_hi = e_top;
        if grid.count_below(e_hi) <= k_max {
            return Err(Error::Resolution(format!("shared grid lost state {k_max}")));
        }
        let mut last_e = f64::NEG_INFINITY;
        for k in 0..=k_max {
            let (mut lo, mut hi) = (w_min, e_hi);
            while hi - lo > cfg.rel_tol * hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE) {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if grid.count_below(mid) <= k {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let e = 0.5 * (lo + hi);
            if e <= last_e {
                return Err(Error::Resolution(format!(
                    "non-monotone levels near state {k}"
                )));
            }
            last_e = e;
            let psi = grid.eigenfunction(e);
            let n = if problem.symmetric {
                match edge {
                    LeftEdge::Even => 2 * k,
                    _ => 2 * k + 1,
                }
            } else {
                k
            };
            states.push((n, e, reflect(&grid, psi, edge)));
        }
    }
    states.sort_by_key(|s| s.0);
    let mut out = Vec::with_capacity(states.len());
    for (n, e, (u, mut psi)) in states {
        let h = u[1] - u[0];
        let norm = trapezoid_product(&psi, &psi, h).sqrt();
        let peak = psi.iter().copied().fold(0.0f64, |m, v| m.max(v.abs()));
        let first = psi
            .iter()
            .copied()
            .find(|v| v.abs() > 1e-3 * peak)
            .unwrap_or(1.0);
        let sign = if first < 0.0 { -1.0 } else { 1.0 };
        psi.iter_mut().for_each(|v| *v *= sign / norm);
        let pair = OracleEigenpair {
            n,
            energy: e,
            u,
            psi,
            alpha: problem.ctx.alpha(),
        };
        if pair.nodes() != n {
            return Err(Error::Resolution(format!(
                "state {n} has {} nodes at E = {e}",
                pair.nodes()
            )));
        }
        out.push(pair);
    }
    for w in out.windows(2) {
        if w[1].energy <= w[0].energy {
            return Err(Error::Resolution(format!(
                "levels {} and {} are out of order",
                w[0].n, w[1].n
            )));
        }
    }
    Ok(out)
}

/// Finds an energy above the `k_max`-th state and the grid on which it was counted.
fn bracket_grid(
    problem: &TransformedProblem,
    edge: LeftEdge,
    k_max: usize,
    w_min: f64,
    cfg: &OracleConfig,
) -> Result<(Grid, f64)> {
    let build = |e: f64| -> Result<Grid> {
        let upper = cutoff(problem, e, cfg.decay_padding)?;
        Grid::build(problem, upper, cfg.points, edge)
    };
    let (u0, ub) = problem.u_range;
    let mut delta = if ub.is_finite() {
        let hb = problem.ctx.hbar_alpha();
        0.5 * hb * hb / (2.0 * problem.ctx.mass_alpha() * (ub - u0).powi(2))
    } else {
        1e-3
    };
    let mut grid = build(w_min + delta)?;
    // shrink below the lowest wanted state, then grow past the highest
    for _ in 0..200 {
        if grid.count_below(w_min + delta) == 0 {
            break;
        }
        delta *= 0.5;
        grid = build(w_min + delta)?;
    }
    for _ in 0..400 {
        if grid.count_below(w_min + delta) > k_max {
            return Ok((grid, w_min + delta));
        }
        delta *= 2.0;
        grid = build(w_min + delta)?;
    }
    Err(Error::Resolution(format!(
        "could not bracket {} states",
        k_max + 1
    )))
}

/// `(u, ψ)` sample vectors.
type Samples = (Vec<f64>, Vec<f64>);

/// Full-line samples for symmetric problems, identity otherwise.
fn reflect(grid: &Grid, psi: Vec<f64>, edge: LeftEdge) -> Samples {
    let n = psi.len();
    let u: Vec<f64> = (0..n).map(|i| grid.u0 + grid.h * i as f64).collect();
    match edge {
        LeftEdge::Dirichlet => (u, psi),
        LeftEdge::Even | LeftEdge::Odd => {
            let sign = if edge == LeftEdge::Even { 1.0 } else { -1.0 };
            let mut full_u = Vec::with_capacity(2 * n - 1);
            let mut full_psi = Vec::with_capacity(2 * n - 1);
            for i in (1..n).rev() {
                full_u.push(-u[i]);
                full_psi.push(sign * psi[i]);
            }
            full_u.extend_from_slice(&u);
            full_psi.extend_from_slice(&psi);
            (full_u, full_psi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::AlphaOrder;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn alpha(a: f64) -> AlphaOrder {
        AlphaOrder::new(a).unwrap()
    }

    #[test]
    fn node_count_examples() {
        let grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
        let s1: Vec<f64> = grid.iter().map(|u| (PI * u).sin()).collect();
        let s3: Vec<f64> = grid.iter().map(|u| (3.0 * PI * u).sin()).collect();
        assert_eq!(node_count(&s1), 0);
        assert_eq!(node_count(&s3), 2);
        assert_eq!(node_count(&[1.0; 10]), 0);
        assert_eq!(node_count(&[0.0; 10]), 0);
    }

    #[test]
    fn transform_examples() {
        let ctx = PhysicalContext::natural(alpha(0.5));
        let well = Potential::infinite_well(1.0, None).unwrap();
        let t = transform_default(&well, &ctx).unwrap();
        assert_eq!(t.u_range(), (0.0, 2.0));
        assert_eq!(t.effective_potential(1.3).unwrap(), 0.0);

        let osc = Potential::damped_oscillator(2.0, 1.0, &ctx).unwrap();
        let t = transform_default(&osc, &ctx).unwrap();
        let w2 = osc.effective_frequency_sq(ctx.alpha());
        for &u in &[0.2, 1.0, 3.0] {
            let harmonic = 0.5 * w2 * (0.5 * u) * (0.5 * u);
            assert_relative_eq!(
                t.effective_potential(u).unwrap(),
                harmonic,
                max_relative = 1e-12
            );
        }

        let ctx1 = PhysicalContext::natural(AlphaOrder::ONE);
        let custom =
            Potential::custom(crate::calculus::RealFunction::new(|x| x * x), (0.5, 3.0)).unwrap();
        let t = transform_default(&custom, &ctx1).unwrap();
        assert_eq!(t.u_range(), (0.5, 3.0));
        assert_relative_eq!(t.effective_potential(2.0).unwrap(), 4.0);

        let coul = Potential::coulomb_barrier(2.0, 1.0, &ctx).unwrap();
        assert!(matches!(
            transform_default(&coul, &ctx),
            Err(Error::Shape(_))
        ));
        assert!(transform(&well, &ctx, (0.0, 2.0)).is_err());
    }

    #[test]
    fn well_levels() {
        let cfg = OracleConfig::default();
        for &(a, expected) in &[(1.0, PI * PI / 2.0), (0.5, 0.25 * PI * PI / 2.0)] {
            let ctx = PhysicalContext::natural(alpha(a));
            let well = Potential::infinite_well(1.0, None).unwrap();
            let states =
                solve_bound_states(&transform_default(&well, &ctx).unwrap(), 2, &cfg).unwrap();
            assert_eq!(states.len(), 3);
            assert_relative_eq!(states[0].energy, expected, max_relative = 1e-6);
            for (i, s) in states.iter().enumerate() {
                assert_eq!(s.nodes(), i);
                assert_relative_eq!(s.norm_sq(), 1.0, max_relative = 1e-10);
                let exact = expected * ((i + 1) * (i + 1)) as f64;
                assert_relative_eq!(s.energy, exact, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn oscillator_levels() {
        let cfg = OracleConfig::default();
        let ctx = PhysicalContext::natural(AlphaOrder::ONE);
        let osc = Potential::damped_oscillator(2.0, 2.0, &ctx).unwrap();
        let states = solve_bound_states(&transform_default(&osc, &ctx).unwrap(), 3, &cfg).unwrap();
        assert_eq!(states.len(), 4);
        for s in &states {
            assert_relative_eq!(
                s.energy,
                3f64.sqrt() * (s.n as f64 + 0.5),
                max_relative = 1e-6
            );
            assert_eq!(s.nodes(), s.n);
            assert_relative_eq!(s.norm_sq(), 1.0, max_relative = 1e-10);
        }
        // parity
        let s1 = &states[1];
        let mid = s1.u.len() / 2;
        assert_eq!(s1.u[mid], 0.0);
        assert_relative_eq!(s1.psi[mid + 100], -s1.psi[mid - 100], max_relative = 1e-12);
    }

    #[test]
    fn orthonormal_eigenfunctions() {
        let cfg = OracleConfig {
            rel_tol: 1e-13,
            ..OracleConfig::default()
        };
        let ctx = PhysicalContext::natural(alpha(0.7));
        let osc = Potential::damped_oscillator(1.5, 0.5, &ctx).unwrap();
        let states = solve_bound_states(&transform_default(&osc, &ctx).unwrap(), 3, &cfg).unwrap();
        for i in 0..states.len() {
            for j in 0..states.len() {
                let o = states[i].overlap(&states[j]).unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((o - expected).abs() < 1e-8, "<{i}|{j}> = {o}");
            }
        }
    }

    #[test]
    fn coarse_grid_still_orders_states() {
        let cfg = OracleConfig {
            points: 401,
            ..OracleConfig::default()
        };
        let ctx = PhysicalContext::natural(AlphaOrder::ONE);
        let well = Potential::infinite_well(1.0, None).unwrap();
        let states = solve_bound_states(&transform_default(&well, &ctx).unwrap(), 5, &cfg).unwrap();
        for (i, s) in states.iter().enumerate() {
            assert_eq!(s.nodes(), i);
        }
    }
}
