//! Mass-action differential inclusion dynamics.
//!
//! The inclusion's fiber at a state `x` is the set of velocities
//! `sum_r k_r x^reactant(r) flux(r)` with each `k_r` ranging over its rate
//! interval. Trajectories are realized by piecewise-constant rate paths
//! sampled from the tempering (every such path is an admissible selection)
//! and integrated with classical fixed-step RK4, stepping aligned to the
//! rate-path breakpoints so the right-hand side is smooth within each step.
//! Integration stops rather than clamps when a coordinate reaches the
//! positivity floor or the overflow ceiling: the inclusion lives on the
//! open orthant, and clamping would fabricate dynamics.

use crate::linfeas::{box_fit, LinFeasError};
use crate::model::{
    flux, invariant_polyhedron_contains, ModelError, ReactionNetwork, SubconfinedSystem,
};
use serde::Serialize;
use thiserror::Error;

pub const POSITIVITY_FLOOR: f64 = 1e-12;
pub const OVERFLOW_CEILING: f64 = 1e12;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("state component {index} must be strictly positive, got {value}")]
    NonPositiveState { index: usize, value: f64 },
    #[error("step size must be positive, got {0}")]
    BadStep(f64),
    #[error("rate path sampling needs dt > 0 and t_end >= dt (got dt={dt}, t_end={t_end})")]
    BadPathSpan { dt: f64, t_end: f64 },
    #[error("non-finite state encountered at t={time}; last valid state {last_valid:?}")]
    NonFiniteState { time: f64, last_valid: Vec<f64> },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    LinFeas(#[from] LinFeasError),
}

/// `x^y = exp(sum_i y_i ln x_i)`; coordinates with zero exponent are
/// skipped, every other coordinate must be strictly positive.
pub fn monomial(x: &[f64], exponents: &[f64]) -> Option<f64> {
    let mut log_sum = 0.0;
    for (xi, yi) in x.iter().zip(exponents) {
        if *yi == 0.0 {
            continue;
        }
        if !xi.is_finite() || *xi <= 0.0 {
            return None;
        }
        log_sum += yi * xi.ln();
    }
    let v = log_sum.exp();
    v.is_finite().then_some(v)
}

/// Mass-action right-hand side for fixed rate constants `k`.
pub fn mass_action_rhs(
    net: &ReactionNetwork,
    sources: &[Vec<f64>],
    fluxes: &[Vec<f64>],
    k: &[f64],
    x: &[f64],
) -> Option<Vec<f64>> {
    let mut out = vec![0.0; net.species().len()];
    for (j, (src, fl)) in sources.iter().zip(fluxes).enumerate() {
        let m = monomial(x, src)?;
        let rate = k[j] * m;
        for (o, f) in out.iter_mut().zip(fl) {
            *o += rate * f;
        }
    }
    Some(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RateScheme {
    /// Constant at each interval's midpoint (a single piece).
    Midpoint,
    /// Independent uniform draw per piece per reaction, deterministic in
    /// the seed.
    UniformRandom,
    /// Alternates the lower and upper endpoint per piece.
    ExtremalCycling,
}

/// Piecewise-constant, right-continuous rate selection from the tempering.
/// `starts[i]` is the left endpoint of piece `i`; `values[i]` holds one
/// rate per reaction, each within the closed hull of that reaction's
/// interval. The final piece extends to any queried time.
#[derive(Debug, Clone, Serialize)]
pub struct RatePath {
    pub starts: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub seed: u64,
    pub scheme: RateScheme,
}

impl RatePath {
    pub fn value_at(&self, t: f64) -> &[f64] {
        let idx = self.starts.partition_point(|s| *s <= t);
        &self.values[idx.saturating_sub(1)]
    }
}

/// Sample a rate path for the system's tempering on `[0, t_end)` with piece
/// length `dt`.
pub fn sample_rate_path(
    sys: &SubconfinedSystem,
    dt: f64,
    t_end: f64,
    seed: u64,
    scheme: RateScheme,
) -> Result<RatePath, DynamicsError> {
    if !dt.is_finite() || dt <= 0.0 || t_end < dt {
        return Err(DynamicsError::BadPathSpan { dt, t_end });
    }
    let intervals = sys.tempering.intervals();
    let path = match scheme {
        RateScheme::Midpoint => RatePath {
            starts: vec![0.0],
            values: vec![intervals.iter().map(|iv| iv.midpoint()).collect()],
            seed,
            scheme,
        },
        RateScheme::ExtremalCycling => {
            let npieces = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
            let starts: Vec<f64> = (0..npieces).map(|i| i as f64 * dt).collect();
            let values: Vec<Vec<f64>> = (0..npieces)
                .map(|i| {
                    intervals
                        .iter()
                        .map(|iv| if i % 2 == 0 { iv.lo } else { iv.hi })
                        .collect()
                })
                .collect();
            RatePath { starts, values, seed, scheme }
        }
        RateScheme::UniformRandom => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let npieces = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
            let starts: Vec<f64> = (0..npieces).map(|i| i as f64 * dt).collect();
            let values: Vec<Vec<f64>> = (0..npieces)
                .map(|_| {
                    intervals
                        .iter()
                        .map(|iv| {
                            if iv.hi > iv.lo {
                                rng.gen_range(iv.lo..=iv.hi)
                            } else {
                                iv.lo
                            }
                        })
                        .collect()
                })
                .collect();
            RatePath { starts, values, seed, scheme }
        }
    };
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TrajectoryStatus {
    Completed,
    /// A coordinate reached the positivity floor; the trajectory ends at
    /// the last in-range state.
    FloorAbort { species: usize, time: f64 },
    /// A coordinate reached the overflow ceiling.
    CeilingAbort { species: usize, time: f64 },
}

impl TrajectoryStatus {
    pub fn is_abort(&self) -> bool {
        !matches!(self, TrajectoryStatus::Completed)
    }
}

/// A sampled trajectory: strictly increasing times starting at 0, strictly
/// positive states (one per RK4 step), the rate path that produced it, and
/// the system it belongs to.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub rate_path: RatePath,
    pub system: SubconfinedSystem,
    pub status: TrajectoryStatus,
    pub warnings: Vec<String>,
}

/// Classical RK4 with fixed step `h`, aligned to the rate path's
/// breakpoints (the last step inside a piece shrinks to land exactly on
/// the boundary). Identical inputs produce bitwise-identical trajectories.
pub fn simulate(
    sys: &SubconfinedSystem,
    x_init: &[f64],
    path: &RatePath,
    t_end: f64,
    h: f64,
) -> Result<Trajectory, DynamicsError> {
    if !h.is_finite() || h <= 0.0 {
        return Err(DynamicsError::BadStep(h));
    }
    let net = &sys.network;
    if x_init.len() != net.species().len() {
        return Err(DynamicsError::Model(ModelError::DimensionMismatch {
            expected: net.species().len(),
            got: x_init.len(),
        }));
    }
    for (i, v) in x_init.iter().enumerate() {
        if !(v.is_finite() && *v > 0.0) {
            return Err(DynamicsError::NonPositiveState { index: i, value: *v });
        }
    }
    let mut warnings = Vec::new();
    if !invariant_polyhedron_contains(net, &sys.base_point, x_init, 1e-9)? {
        warnings.push(
            "initial condition lies off the base point's invariant polyhedron".to_string(),
        );
    }

    let sources: Vec<Vec<f64>> =
        net.reactions().iter().map(|r| r.reactant.coeffs().to_vec()).collect();
    let fluxes: Vec<Vec<f64>> = net.reactions().iter().map(flux).collect();

    let mut times = vec![0.0];
    let mut states = vec![x_init.to_vec()];
    let mut status = TrajectoryStatus::Completed;

    let range_violation = |x: &[f64]| -> Option<(usize, bool)> {
        for (i, v) in x.iter().enumerate() {
            if *v <= POSITIVITY_FLOOR {
                return Some((i, true));
            }
            if *v >= OVERFLOW_CEILING {
                return Some((i, false));
            }
        }
        None
    };

    if let Some((i, is_floor)) = range_violation(x_init) {
        status = if is_floor {
            TrajectoryStatus::FloorAbort { species: i, time: 0.0 }
        } else {
            TrajectoryStatus::CeilingAbort { species: i, time: 0.0 }
        };
        return Ok(Trajectory {
            times,
            states,
            rate_path: path.clone(),
            system: sys.clone(),
            status,
            warnings,
        });
    }

    // piece boundaries within (0, t_end), plus the endpoints
    let mut bounds: Vec<f64> = vec![0.0];
    for &s in &path.starts {
        if s > 0.0 && s < t_end {
            bounds.push(s);
        }
    }
    bounds.push(t_end);

    'outer: for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let span = b - a;
        if span <= 0.0 {
            continue;
        }
        let k = path.value_at(a).to_vec();
        let nsteps = ((span / h) - 1e-9).ceil().max(1.0) as usize;
        for step in 1..=nsteps {
            let t_prev = *times.last().unwrap();
            let t1 = if step == nsteps { b } else { a + step as f64 * h };
            let dt = t1 - t_prev;
            if dt <= 0.0 {
                continue;
            }
            let x = states.last().unwrap().clone();
            let eval = |y: &[f64]| mass_action_rhs(net, &sources, &fluxes, &k, y);
            let nonfinite = || DynamicsError::NonFiniteState { time: t_prev, last_valid: x.clone() };
            let k1 = eval(&x).ok_or_else(nonfinite)?;
            let mid1: Vec<f64> =
                x.iter().zip(&k1).map(|(xi, ki)| xi + 0.5 * dt * ki).collect();
            let k2 = eval(&mid1).ok_or_else(nonfinite)?;
            let mid2: Vec<f64> =
                x.iter().zip(&k2).map(|(xi, ki)| xi + 0.5 * dt * ki).collect();
            let k3 = eval(&mid2).ok_or_else(nonfinite)?;
            let end: Vec<f64> = x.iter().zip(&k3).map(|(xi, ki)| xi + dt * ki).collect();
            let k4 = eval(&end).ok_or_else(nonfinite)?;
            let x_next: Vec<f64> = (0..x.len())
                .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                .collect();
            if x_next.iter().any(|v| !v.is_finite()) {
                return Err(DynamicsError::NonFiniteState { time: t1, last_valid: x });
            }
            if let Some((i, is_floor)) = range_violation(&x_next) {
                status = if is_floor {
                    TrajectoryStatus::FloorAbort { species: i, time: t1 }
                } else {
                    TrajectoryStatus::CeilingAbort { species: i, time: t1 }
                };
                break 'outer;
            }
            times.push(t1);
            states.push(x_next);
        }
    }

    Ok(Trajectory {
        times,
        states,
        rate_path: path.clone(),
        system: sys.clone(),
        status,
        warnings,
    })
}

/// Outcome of a fiber membership query.
#[derive(Debug, Clone, Serialize)]
pub struct FiberCheck {
    pub contains: bool,
    pub residual: f64,
    pub coefficients: Vec<f64>,
}

/// Does the tangent `v` belong to the mass-action fiber at `x` (within
/// `tol` in the max norm)? Points outside the closure of the allotment
/// hypercube have an empty fiber. The returned coefficients are the
/// best-fitting rates, one per reaction, each within its interval's closed
/// hull.
pub fn fiber_contains(
    sys: &SubconfinedSystem,
    x: &[f64],
    v: &[f64],
    tol: f64,
) -> Result<FiberCheck, DynamicsError> {
    let net = &sys.network;
    if x.len() != net.species().len() || v.len() != net.species().len() {
        return Err(DynamicsError::Model(ModelError::DimensionMismatch {
            expected: net.species().len(),
            got: x.len().max(v.len()),
        }));
    }
    for (i, val) in x.iter().enumerate() {
        if !(val.is_finite() && *val > 0.0) {
            return Err(DynamicsError::NonPositiveState { index: i, value: *val });
        }
    }
    let in_closure = x.iter().enumerate().all(|(i, &xi)| {
        let iv = sys.allotment.interval(i);
        let lo_ok = xi >= iv.lo * (1.0 - 1e-9);
        let hi_ok = !iv.hi.is_finite() || xi <= iv.hi * (1.0 + 1e-9);
        lo_ok && hi_ok
    });
    if !in_closure {
        return Ok(FiberCheck { contains: false, residual: f64::INFINITY, coefficients: Vec::new() });
    }
    let mut columns = Vec::with_capacity(net.reactions().len());
    for r in net.reactions() {
        let m = monomial(x, r.reactant.coeffs()).ok_or(DynamicsError::NonPositiveState {
            index: 0,
            value: 0.0,
        })?;
        columns.push(flux(r).iter().map(|f| m * f).collect::<Vec<f64>>());
    }
    let boxes: Vec<_> = sys.tempering.intervals().to_vec();
    let (coefficients, residual) = box_fit(&columns, &boxes, v)?;
    Ok(FiberCheck { contains: residual <= tol, residual, coefficients })
}

/// The entropy-like monitor `g_alpha(x) = sum_i x_i (ln(x_i / alpha_i) - 1)`.
pub fn lyapunov_value(x: &[f64], alpha: &[f64]) -> Result<f64, DynamicsError> {
    if x.len() != alpha.len() {
        return Err(DynamicsError::Model(ModelError::DimensionMismatch {
            expected: alpha.len(),
            got: x.len(),
        }));
    }
    let mut sum = 0.0;
    for (i, (xi, ai)) in x.iter().zip(alpha).enumerate() {
        if !xi.is_finite() || *xi <= 0.0 {
            return Err(DynamicsError::NonPositiveState { index: i, value: *xi });
        }
        if !ai.is_finite() || *ai <= 0.0 {
            return Err(DynamicsError::NonPositiveState { index: i, value: *ai });
        }
        sum += xi * ((xi / ai).ln() - 1.0);
    }
    Ok(sum)
}

/// [`lyapunov_value`] along a trajectory's states.
pub fn lyapunov_along(traj: &Trajectory, alpha: &[f64]) -> Result<Vec<f64>, DynamicsError> {
    traj.states.iter().map(|x| lyapunov_value(x, alpha)).collect()
}
