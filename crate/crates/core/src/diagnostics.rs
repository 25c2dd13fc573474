//! Numerical diagnostics on simulated trajectories.
//!
//! * Factorization: while a trajectory stays inside the epsilon-block of a
//!   face collapsed by a projection, its projected tangent must lie in the
//!   mass-action fiber of the projected system (whose allotment gives every
//!   removed species the band pulled back from `[eps, 1-eps]`). This is
//!   checked sample by sample with central-difference tangent estimates.
//! * Persistence / repulsion / permanence probes: seeded trajectory
//!   ensembles with distance bookkeeping in cube coordinates. These are
//!   evidence generators, not decision procedures; every report carries the
//!   ensemble parameters that scope its claim.

use crate::cube::{block_contains, to_cube, CubeError, Face};
use crate::dynamics::{
    mass_action_rhs, sample_rate_path, simulate, DynamicsError, RateScheme, Trajectory,
    TrajectoryStatus, POSITIVITY_FLOOR,
};
use crate::interval::PositiveInterval;
use crate::model::{flux, stoichiometric_basis, ModelError, SubconfinedSystem};
use crate::reduce::{project_system, Projection, ReduceError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("face must fix a proper nonempty subset of the species")]
    BadFace,
    #[error("face species do not match the system species")]
    FaceSpeciesMismatch,
    #[error("probe grid must be positive and strictly increasing")]
    BadGrid,
    #[error("start box must be contained in the candidate absorbing box")]
    BoxNotNested,
    #[error("too many kept species ({0}) to enumerate collapsed faces")]
    TooManyFaces(usize),
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Maximal runs of consecutive trajectory samples (index ranges, inclusive)
/// whose cube images lie in the epsilon-block of the face.
pub fn block_segments(
    traj: &Trajectory,
    face: &Face,
    eps: f64,
) -> Result<Vec<(usize, usize)>, DiagnosticsError> {
    let mut segments = Vec::new();
    let mut current: Option<usize> = None;
    for (i, state) in traj.states.iter().enumerate() {
        let z = to_cube(state)?;
        let inside = block_contains(face, eps, &z)?;
        match (inside, current) {
            (true, None) => current = Some(i),
            (false, Some(start)) => {
                segments.push((start, i - 1));
                current = None;
            }
            _ => {}
        }
    }
    if let Some(start) = current {
        segments.push((start, traj.states.len() - 1));
    }
    Ok(segments)
}

/// Result of checking the projection factorization on one collapsed face.
#[derive(Debug, Clone, Serialize)]
pub struct FactorizationReport {
    pub face: Face,
    pub eps: f64,
    pub tol: f64,
    /// Maximal in-block sample ranges, inclusive.
    pub segments: Vec<(usize, usize)>,
    /// Segments with fewer than 3 samples, skipped (no interior sample).
    pub skipped_segments: usize,
    pub evaluated_samples: usize,
    /// Per evaluated sample: distance of the estimated projected tangent
    /// to the projected system's fiber (box-constrained best fit).
    pub fiber_residuals: Vec<f64>,
    pub max_fiber_residual: f64,
    /// Per evaluated sample: distance of the estimated projected tangent
    /// to the reduced velocity reconstructed from the recorded rate path
    /// and the removed coordinates. Pure tangent-estimation error; shrinks
    /// quadratically with the integration step away from rate breakpoints.
    pub tangent_residuals: Vec<f64>,
    pub max_tangent_residual: f64,
    pub pass: bool,
    /// Time reparametrization relating the projected curve to the reduced
    /// trajectory; the mass-action projection morphism needs none.
    pub reparametrization: String,
}

/// The projected comparison system for a factorization check: the original
/// system with its allotment replaced by "free on kept species, the
/// epsilon band (pulled back to the orthant) on removed species", then
/// projected onto the kept species. The replacement allotment is
/// projectable by construction.
pub fn factorization_target(
    sys: &SubconfinedSystem,
    proj: &Projection,
    eps: f64,
) -> Result<SubconfinedSystem, DiagnosticsError> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(DiagnosticsError::Cube(CubeError::BadEpsilon(eps)));
    }
    let lo = eps / (1.0 - eps);
    let hi = (1.0 - eps) / eps;
    let band = PositiveInterval::open(lo, hi).expect("eps in (0, 1/2) gives a valid band");
    let species = sys.network.species().clone();
    let kept = proj.kept();
    let intervals: Vec<PositiveInterval> = (0..species.len())
        .map(|i| {
            if kept.contains(&i) {
                PositiveInterval::positive_ray()
            } else {
                band
            }
        })
        .collect();
    let allotment = crate::model::Allotment::new(&species, intervals)?;
    // clamp removed coordinates of the base point into the band's closure;
    // the projected base point only reads the kept coordinates
    let base_point: Vec<f64> = sys
        .base_point
        .iter()
        .enumerate()
        .map(|(i, &v)| if kept.contains(&i) { v } else { v.clamp(lo, hi) })
        .collect();
    let adjusted = SubconfinedSystem::new(
        sys.network.clone(),
        sys.tempering.clone(),
        allotment,
        base_point,
    )?;
    Ok(project_system(&adjusted, proj)?)
}

/// Check the factorization on one face, comparing against a caller-supplied
/// projected system (the default pipeline passes [`factorization_target`];
/// negative controls can pass a tampered one).
pub fn verify_factorization_face_against(
    sys: &SubconfinedSystem,
    traj: &Trajectory,
    face: &Face,
    eps: f64,
    tol: f64,
    reduced: &SubconfinedSystem,
) -> Result<FactorizationReport, DiagnosticsError> {
    if face.species() != sys.network.species() {
        return Err(DiagnosticsError::FaceSpeciesMismatch);
    }
    let kept = face.fixed_indices();
    if kept.is_empty() || kept.len() == face.species().len() {
        return Err(DiagnosticsError::BadFace);
    }
    let proj = Projection::new(sys.network.species(), &kept)?;

    let segments = block_segments(traj, face, eps)?;
    let sources: Vec<Vec<f64>> = sys
        .network
        .reactions()
        .iter()
        .map(|r| r.reactant.coeffs().to_vec())
        .collect();
    let fluxes: Vec<Vec<f64>> = sys.network.reactions().iter().map(flux).collect();

    let mut fiber_residuals = Vec::new();
    let mut tangent_residuals = Vec::new();
    let mut skipped = 0usize;
    for &(start, end) in &segments {
        if end - start + 1 < 3 {
            skipped += 1;
            continue;
        }
        for i in start + 1..end {
            let span = traj.times[i + 1] - traj.times[i - 1];
            let ahead = proj.project_vector(&traj.states[i + 1]);
            let behind = proj.project_vector(&traj.states[i - 1]);
            let tangent: Vec<f64> =
                ahead.iter().zip(&behind).map(|(a, b)| (a - b) / span).collect();
            let point = proj.project_vector(&traj.states[i]);

            let check = crate::dynamics::fiber_contains(reduced, &point, &tangent, tol)?;
            fiber_residuals.push(check.residual);

            let k = traj.rate_path.value_at(traj.times[i]);
            let full_rhs = mass_action_rhs(&sys.network, &sources, &fluxes, k, &traj.states[i])
                .ok_or(DynamicsError::NonFiniteState {
                    time: traj.times[i],
                    last_valid: traj.states[i].clone(),
                })?;
            let reduced_rhs = proj.project_vector(&full_rhs);
            let dev = tangent
                .iter()
                .zip(&reduced_rhs)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            tangent_residuals.push(dev);
        }
    }
    let max_fiber_residual = fiber_residuals.iter().fold(0.0f64, |m, v| m.max(*v));
    let max_tangent_residual = tangent_residuals.iter().fold(0.0f64, |m, v| m.max(*v));
    Ok(FactorizationReport {
        face: face.clone(),
        eps,
        tol,
        segments,
        skipped_segments: skipped,
        evaluated_samples: fiber_residuals.len(),
        fiber_residuals,
        max_fiber_residual,
        tangent_residuals,
        max_tangent_residual,
        pass: max_fiber_residual <= tol,
        reparametrization: "identity".to_string(),
    })
}

/// Check the factorization on one face against the canonical projected
/// system.
pub fn verify_factorization_face(
    sys: &SubconfinedSystem,
    traj: &Trajectory,
    face: &Face,
    eps: f64,
    tol: f64,
) -> Result<FactorizationReport, DiagnosticsError> {
    let kept = face.fixed_indices();
    let proj = Projection::new(sys.network.species(), &kept)?;
    let reduced = factorization_target(sys, &proj, eps)?;
    verify_factorization_face_against(sys, traj, face, eps, tol, &reduced)
}

/// Check the factorization on every face collapsed by the projection (one
/// face per 0/1 assignment on the kept species), in binary counting order.
pub fn verify_factorization(
    sys: &SubconfinedSystem,
    traj: &Trajectory,
    proj: &Projection,
    eps: f64,
    tol: f64,
) -> Result<Vec<FactorizationReport>, DiagnosticsError> {
    let kept = proj.kept();
    if kept.is_empty() || kept.len() >= sys.network.species().len() {
        return Err(DiagnosticsError::BadFace);
    }
    if kept.len() > 16 {
        return Err(DiagnosticsError::TooManyFaces(kept.len()));
    }
    let reduced = factorization_target(sys, proj, eps)?;
    let mut reports = Vec::new();
    for mask in 0u64..(1u64 << kept.len()) {
        let kept_vertex: Vec<f64> = (0..kept.len())
            .map(|b| if mask & (1 << b) != 0 { 1.0 } else { 0.0 })
            .collect();
        let face = Face::collapsed_by(proj, &kept_vertex)?;
        reports.push(verify_factorization_face_against(sys, traj, &face, eps, tol, &reduced)?);
    }
    Ok(reports)
}

/// Parameters for a trajectory ensemble: seeded starts drawn uniformly
/// from a box, one rate path per trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSpec {
    pub n_traj: usize,
    pub base_seed: u64,
    /// Componentwise start box in orthant coordinates (closed hull used).
    pub init_box: Vec<PositiveInterval>,
    pub dt: f64,
    pub t_end: f64,
    pub h: f64,
    pub scheme: RateScheme,
}

impl EnsembleSpec {
    fn draw_start(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.init_box
            .iter()
            .map(|iv| if iv.hi > iv.lo { rng.gen_range(iv.lo..=iv.hi) } else { iv.lo })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryDiagnostics {
    pub seed: u64,
    pub start: Vec<f64>,
    pub status: TrajectoryStatus,
    pub n_samples: usize,
    pub min_boundary_distance: f64,
    /// Minimum boundary distance over the trailing tenth of the samples.
    pub tail_min_boundary_distance: f64,
}

/// Ensemble evidence about boundary avoidance, in cube coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct PersistenceReport {
    pub spec: EnsembleSpec,
    pub per_trajectory: Vec<TrajectoryDiagnostics>,
    pub min_boundary_distance: Option<f64>,
    /// Per cube vertex (binary counting order): minimum distance attained
    /// over the whole ensemble.
    pub vertex_min_distances: Vec<(Vec<f64>, f64)>,
    /// Per facet `(coordinate, side)`: minimum distance attained.
    pub facet_min_distances: Vec<(usize, f64, f64)>,
    pub any_floor_abort: bool,
    pub any_ceiling_abort: bool,
}

pub fn persistence_probe(
    sys: &SubconfinedSystem,
    spec: &EnsembleSpec,
) -> Result<PersistenceReport, DiagnosticsError> {
    let n = sys.network.species().len();
    if n > 16 {
        return Err(DiagnosticsError::TooManyFaces(n));
    }
    let nv = 1usize << n;
    let mut vertex_min = vec![f64::INFINITY; nv];
    let mut facet_min = vec![f64::INFINITY; 2 * n];
    let mut per_trajectory = Vec::with_capacity(spec.n_traj);
    let mut overall: Option<f64> = None;
    let mut any_floor = false;
    let mut any_ceiling = false;

    for idx in 0..spec.n_traj {
        let seed = spec.base_seed + idx as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = spec.draw_start(&mut rng);
        let path = sample_rate_path(sys, spec.dt, spec.t_end, seed, spec.scheme)?;
        let traj = simulate(sys, &start, &path, spec.t_end, spec.h)?;

        let mut traj_min = f64::INFINITY;
        let tail_from = traj.states.len().saturating_sub((traj.states.len() / 10).max(1));
        let mut tail_min = f64::INFINITY;
        for (i, state) in traj.states.iter().enumerate() {
            let z = to_cube(state)?;
            let d = crate::cube::boundary_distances(&z);
            traj_min = traj_min.min(d.boundary);
            if i >= tail_from {
                tail_min = tail_min.min(d.boundary);
            }
            for (v, (_, dist)) in vertex_min.iter_mut().zip(&d.vertices) {
                *v = v.min(*dist);
            }
            for (f, (_, _, dist)) in facet_min.iter_mut().zip(&d.facets) {
                *f = f.min(*dist);
            }
        }
        match traj.status {
            TrajectoryStatus::FloorAbort { .. } => any_floor = true,
            TrajectoryStatus::CeilingAbort { .. } => any_ceiling = true,
            TrajectoryStatus::Completed => {}
        }
        overall = Some(overall.map_or(traj_min, |m: f64| m.min(traj_min)));
        per_trajectory.push(TrajectoryDiagnostics {
            seed,
            start,
            status: traj.status.clone(),
            n_samples: traj.states.len(),
            min_boundary_distance: traj_min,
            tail_min_boundary_distance: tail_min,
        });
    }

    let vertex_min_distances = (0..nv)
        .map(|mask| {
            let coords: Vec<f64> =
                (0..n).map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 }).collect();
            (coords, vertex_min[mask])
        })
        .collect();
    let facet_min_distances = (0..n)
        .flat_map(|i| {
            [(i, 0.0, facet_min[2 * i]), (i, 1.0, facet_min[2 * i + 1])]
        })
        .collect();

    Ok(PersistenceReport {
        spec: spec.clone(),
        per_trajectory,
        min_boundary_distance: overall,
        vertex_min_distances,
        facet_min_distances,
        any_floor_abort: any_floor,
        any_ceiling_abort: any_ceiling,
    })
}

/// What a repulsion probe aims at: a cube vertex or a face.
#[derive(Debug, Clone, Serialize)]
pub enum ProbeTarget {
    Vertex(Vec<f64>),
    Face(Face),
}

impl ProbeTarget {
    fn distance(&self, z: &[f64]) -> f64 {
        match self {
            ProbeTarget::Vertex(v) => z
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            ProbeTarget::Face(face) => face.distance_to(z),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RepulsionRow {
    pub d1: f64,
    /// Starts were accepted with target distance in `[d1, d1 + band]`.
    pub band: f64,
    pub n_starts: usize,
    /// Minimum distance to the target attained over the ensemble.
    pub d2: Option<f64>,
    pub unsampled: bool,
}

/// Empirical start-distance vs. stay-distance table. A flat positive `d2`
/// column is evidence (not proof) that the target repels the dynamics.
#[derive(Debug, Clone, Serialize)]
pub struct RepulsionTable {
    pub target: ProbeTarget,
    pub spec: EnsembleSpec,
    pub start_spread: f64,
    pub rows: Vec<RepulsionRow>,
}

const REJECTION_ATTEMPTS: usize = 400;

/// For each grid distance `d1`, launch trajectories whose starts sit at
/// cube distance just above `d1` from the target (rejection-sampled within
/// the invariant polyhedron slice through the base point, intersected with
/// the allotment), and record the minimum distance the ensemble ever
/// attains. `start_spread` scales the coefficient range along the
/// stoichiometric basis.
pub fn repulsion_probe(
    sys: &SubconfinedSystem,
    target: &ProbeTarget,
    d1_grid: &[f64],
    spec: &EnsembleSpec,
    start_spread: f64,
) -> Result<RepulsionTable, DiagnosticsError> {
    if d1_grid.iter().any(|d| *d <= 0.0) || d1_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DiagnosticsError::BadGrid);
    }
    let basis = stoichiometric_basis(&sys.network);
    let mut rows = Vec::with_capacity(d1_grid.len());
    for (row_idx, &d1) in d1_grid.iter().enumerate() {
        let band = (0.25 * d1).max(0.05);
        let row_seed = spec.base_seed.wrapping_add(1_000_003u64.wrapping_mul(row_idx as u64));
        let mut rng = ChaCha8Rng::seed_from_u64(row_seed);
        let mut d2: Option<f64> = None;
        let mut n_starts = 0usize;
        for traj_idx in 0..spec.n_traj {
            let mut start: Option<Vec<f64>> = None;
            for _ in 0..REJECTION_ATTEMPTS {
                let mut x = sys.base_point.clone();
                for b in &basis {
                    let c: f64 = rng.gen_range(-start_spread..=start_spread);
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi += c * bi;
                    }
                }
                if x.iter().any(|v| *v <= POSITIVITY_FLOOR) || !sys.allotment.closure_contains(&x)
                {
                    continue;
                }
                let z = to_cube(&x)?;
                let dist = target.distance(&z);
                if dist >= d1 && dist <= d1 + band {
                    start = Some(x);
                    break;
                }
            }
            let Some(x0) = start else { continue };
            n_starts += 1;
            let seed = row_seed.wrapping_add(traj_idx as u64 + 1);
            let path = sample_rate_path(sys, spec.dt, spec.t_end, seed, spec.scheme)?;
            let traj = simulate(sys, &x0, &path, spec.t_end, spec.h)?;
            for state in &traj.states {
                let z = to_cube(state)?;
                let dist = target.distance(&z);
                d2 = Some(d2.map_or(dist, |m: f64| m.min(dist)));
            }
        }
        rows.push(RepulsionRow { d1, band, n_starts, d2, unsampled: n_starts == 0 });
    }
    Ok(RepulsionTable {
        target: target.clone(),
        spec: spec.clone(),
        start_spread,
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PermanenceTrajectory {
    pub seed: u64,
    pub start: Vec<f64>,
    pub first_entry: Option<f64>,
    pub first_exit: Option<(f64, Vec<f64>)>,
    pub remains: bool,
    pub status: TrajectoryStatus,
}

/// Evidence that trajectories started in `start_box` are absorbed by (and
/// stay in) `absorbing_box`.
#[derive(Debug, Clone, Serialize)]
pub struct PermanenceReport {
    pub start_box: Vec<PositiveInterval>,
    pub absorbing_box: Vec<PositiveInterval>,
    pub spec: EnsembleSpec,
    pub per_trajectory: Vec<PermanenceTrajectory>,
    pub pass: bool,
}

pub fn permanence_probe(
    sys: &SubconfinedSystem,
    start_box: &[PositiveInterval],
    absorbing_box: &[PositiveInterval],
    spec: &EnsembleSpec,
) -> Result<PermanenceReport, DiagnosticsError> {
    let n = sys.network.species().len();
    if start_box.len() != n || absorbing_box.len() != n {
        return Err(DiagnosticsError::Model(ModelError::DimensionMismatch {
            expected: n,
            got: start_box.len().max(absorbing_box.len()),
        }));
    }
    let nested = start_box
        .iter()
        .zip(absorbing_box)
        .all(|(k, kp)| k.lo >= kp.lo && k.hi <= kp.hi);
    if !nested {
        return Err(DiagnosticsError::BoxNotNested);
    }
    let inside = |x: &[f64], boxes: &[PositiveInterval]| -> bool {
        x.iter().zip(boxes).all(|(v, iv)| iv.closure_contains(*v))
    };
    let mut per_trajectory = Vec::with_capacity(spec.n_traj);
    let mut pass = true;
    for idx in 0..spec.n_traj {
        let seed = spec.base_seed + idx as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start: Vec<f64> = start_box
            .iter()
            .map(|iv| if iv.hi > iv.lo { rng.gen_range(iv.lo..=iv.hi) } else { iv.lo })
            .collect();
        let path = sample_rate_path(sys, spec.dt, spec.t_end, seed, spec.scheme)?;
        let traj = simulate(sys, &start, &path, spec.t_end, spec.h)?;
        let mut first_entry: Option<f64> = None;
        let mut first_exit: Option<(f64, Vec<f64>)> = None;
        for (t, state) in traj.times.iter().zip(&traj.states) {
            let in_abs = inside(state, absorbing_box);
            if first_entry.is_none() && in_abs {
                first_entry = Some(*t);
            }
            if first_entry.is_some() && !in_abs && first_exit.is_none() {
                first_exit = Some((*t, state.clone()));
            }
        }
        let remains =
            first_entry.is_some() && first_exit.is_none() && !traj.status.is_abort();
        pass &= remains;
        per_trajectory.push(PermanenceTrajectory {
            seed,
            start,
            first_entry,
            first_exit,
            remains,
            status: traj.status.clone(),
        });
    }
    Ok(PermanenceReport {
        start_box: start_box.to_vec(),
        absorbing_box: absorbing_box.to_vec(),
        spec: spec.clone(),
        per_trajectory,
        pass,
    })
}
