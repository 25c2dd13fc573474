//! Species-removal projection on networks and subconfined systems.
//!
//! Reducing a network to a subset `U` of species deletes the coordinates of
//! every complex outside `U`; complexes and reactions that collide are
//! deduplicated, and reactions that become trivial are kept. Projecting a
//! whole system additionally transforms each rate interval by the interval
//! powers of the removed species' allotments, restricts the allotment, and
//! projects the base point. Distinct reactions that collide under the
//! projection contribute the union hull of their transformed rate
//! intervals; the per-source intervals are preserved in the merge records
//! so both readings of a merged rate stay available.

use crate::interval::{interval_mul, interval_pow, PositiveInterval};
use crate::model::{
    Allotment, Complex, ModelError, Reaction, ReactionNetwork, SpeciesSet, SubconfinedSystem,
    Tempering,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ReduceError {
    #[error("kept species set must be nonempty")]
    EmptyKeptSet,
    #[error("kept species index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("unknown species name: {0:?}")]
    UnknownSpecies(String),
    #[error("species {name:?} is removed but its allotment is not bounded away from 0 and inf")]
    NotProjectable { name: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A projection of a species set onto a nonempty subset of kept species.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection {
    source: SpeciesSet,
    kept: Vec<usize>,
}

impl Projection {
    pub fn new(source: &SpeciesSet, kept: &[usize]) -> Result<Self, ReduceError> {
        let mut kept: Vec<usize> = kept.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.is_empty() {
            return Err(ReduceError::EmptyKeptSet);
        }
        if let Some(&bad) = kept.iter().find(|&&i| i >= source.len()) {
            return Err(ReduceError::IndexOutOfRange(bad));
        }
        Ok(Self { source: source.clone(), kept })
    }

    pub fn by_names(source: &SpeciesSet, names: &[&str]) -> Result<Self, ReduceError> {
        let indices: Vec<usize> = names
            .iter()
            .map(|n| {
                source
                    .index_of(n)
                    .ok_or_else(|| ReduceError::UnknownSpecies((*n).to_string()))
            })
            .collect::<Result<_, _>>()?;
        Self::new(source, &indices)
    }

    pub fn source(&self) -> &SpeciesSet {
        &self.source
    }

    /// Kept species indices, sorted ascending.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn removed(&self) -> Vec<usize> {
        (0..self.source.len()).filter(|i| !self.kept.contains(i)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.kept.len() == self.source.len()
    }

    pub fn kept_species(&self) -> SpeciesSet {
        SpeciesSet::new(self.kept.iter().map(|&i| self.source.name(i).to_string()))
            .expect("kept subset of a valid species set is valid")
    }

    pub fn project_vector(&self, v: &[f64]) -> Vec<f64> {
        self.kept.iter().map(|&i| v[i]).collect()
    }

    pub fn project_complex(&self, c: &Complex) -> Complex {
        Complex::new(self.project_vector(c.coeffs())).expect("projection preserves finiteness")
    }
}

/// The reduced network: species restricted to the kept set, complexes and
/// reactions projected coordinatewise and deduplicated. Trivial reactions
/// arising from the projection are retained.
pub fn reduce_network(net: &ReactionNetwork, proj: &Projection) -> ReactionNetwork {
    let species = proj.kept_species();
    let complexes: Vec<Complex> =
        net.complexes().iter().map(|c| proj.project_complex(c)).collect();
    let reactions: Vec<Reaction> = net
        .reactions()
        .iter()
        .map(|r| {
            Reaction::new(proj.project_complex(&r.reactant), proj.project_complex(&r.product))
                .expect("projected complexes share the kept dimension")
        })
        .collect();
    ReactionNetwork::new(species, complexes, reactions)
        .expect("projection of a valid network is valid")
}

/// A kept set is admissible iff every removed species has an allotment
/// bounded away from 0 and inf. Keeping everything is always admissible.
pub fn is_projectable(mu: &Allotment, proj: &Projection) -> bool {
    proj.removed().iter().all(|&i| mu.interval(i).is_bounded())
}

/// How one reduced reaction was assembled: the source reactions that
/// project onto it and each source's transformed rate interval. The
/// reduced system's tempering is the union hull of the listed intervals.
#[derive(Debug, Clone, Serialize)]
pub struct MergeRecord {
    pub reduced_reaction: usize,
    pub sources: Vec<(usize, PositiveInterval)>,
}

/// [`project_system`] plus the per-reduced-reaction merge records.
pub fn project_system_detailed(
    sys: &SubconfinedSystem,
    proj: &Projection,
) -> Result<(SubconfinedSystem, Vec<MergeRecord>), ReduceError> {
    let net = &sys.network;
    if let Some(&bad) = proj.removed().iter().find(|&&i| !sys.allotment.interval(i).is_bounded())
    {
        return Err(ReduceError::NotProjectable { name: net.species().name(bad).to_string() });
    }
    let reduced_net = reduce_network(net, proj);
    let removed = proj.removed();

    let mut records: Vec<MergeRecord> = Vec::new();
    for (i, r) in net.reactions().iter().enumerate() {
        let image = Reaction::new(
            proj.project_complex(&r.reactant),
            proj.project_complex(&r.product),
        )
        .unwrap();
        let reduced_index = reduced_net
            .reactions()
            .iter()
            .position(|q| *q == image)
            .expect("every projected reaction appears in the reduced network");
        // kappa'(pi(r)) = kappa(r) * prod over removed s of mu(s)^(reactant_s)
        let mut iv = *sys.tempering.interval(i);
        for &s in &removed {
            let exponent = r.reactant.coeffs()[s];
            iv = interval_mul(&iv, &interval_pow(sys.allotment.interval(s), exponent));
        }
        match records.iter_mut().find(|m| m.reduced_reaction == reduced_index) {
            Some(m) => m.sources.push((i, iv)),
            None => records.push(MergeRecord { reduced_reaction: reduced_index, sources: vec![(i, iv)] }),
        }
    }
    records.sort_by_key(|m| m.reduced_reaction);

    let intervals: Vec<PositiveInterval> = records
        .iter()
        .map(|m| {
            let mut hull = m.sources[0].1;
            for (_, iv) in &m.sources[1..] {
                hull = hull.hull(iv);
            }
            hull
        })
        .collect();
    let tempering = Tempering::new(&reduced_net, intervals)?;

    let kept_species = reduced_net.species().clone();
    let allotment = Allotment::new(
        &kept_species,
        proj.kept().iter().map(|&i| *sys.allotment.interval(i)).collect(),
    )?;
    let base_point = proj.project_vector(&sys.base_point);
    let reduced = SubconfinedSystem::new(reduced_net, tempering, allotment, base_point)?;
    Ok((reduced, records))
}

/// The projection morphism on subconfined systems: reduced network,
/// transformed tempering, restricted allotment, projected base point.
pub fn project_system(
    sys: &SubconfinedSystem,
    proj: &Projection,
) -> Result<SubconfinedSystem, ReduceError> {
    project_system_detailed(sys, proj).map(|(s, _)| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::*;

    fn keep(net: &ReactionNetwork, names: &[&str]) -> Projection {
        Projection::by_names(net.species(), names).unwrap()
    }

    #[test]
    fn reduce_reversed_lv_to_a() {
        let net = lv_reversed_network();
        let reduced = reduce_network(&net, &keep(&net, &["A"]));
        assert_eq!(reduced.species().names(), &["A".to_string()]);
        let rxs: Vec<(Vec<f64>, Vec<f64>)> = reduced
            .reactions()
            .iter()
            .map(|r| (r.reactant.coeffs().to_vec(), r.product.coeffs().to_vec()))
            .collect();
        assert_eq!(rxs.len(), 3);
        assert!(rxs.contains(&(vec![2.0], vec![1.0]))); // 2A -> A
        assert!(rxs.contains(&(vec![0.0], vec![1.0]))); // 0 -> A
        assert!(rxs.contains(&(vec![0.0], vec![0.0]))); // 0 -> 0
    }

    #[test]
    fn reduce_keeping_everything_is_identity() {
        let net = lv_reversed_network();
        let reduced = reduce_network(&net, &keep(&net, &["A", "B"]));
        assert_eq!(reduced, net);
    }

    #[test]
    fn reduce_drops_coordinate() {
        let net = lotka_volterra_network();
        let reduced = reduce_network(&net, &keep(&net, &["B"]));
        // A + B -> 2B becomes B -> 2B
        assert!(reduced
            .reactions()
            .iter()
            .any(|r| r.reactant.coeffs() == [1.0] && r.product.coeffs() == [2.0]));
    }

    #[test]
    fn projectability_rules() {
        let net = lv_reversed_network();
        let species = net.species().clone();
        let unconstrained = Allotment::unconstrained(&species);
        let proj_a = keep(&net, &["A"]);
        assert!(!is_projectable(&unconstrained, &proj_a));
        let bounded_b = Allotment::new(
            &species,
            vec![PositiveInterval::positive_ray(), PositiveInterval::open(1.0, 2.0).unwrap()],
        )
        .unwrap();
        assert!(is_projectable(&bounded_b, &proj_a));
        let all = keep(&net, &["A", "B"]);
        assert!(is_projectable(&unconstrained, &all));
    }

    #[test]
    fn tempering_transform_on_reversed_lv() {
        // kappa(2B -> A+B) = [3,3], mu(B) = (1,2):
        // kappa'(0 -> A) = [3,3] * (1,2)^2 = (3,12)
        let net = lv_reversed_network();
        let species = net.species().clone();
        let mut intervals = vec![PositiveInterval::point(1.0).unwrap(); 3];
        intervals[1] = PositiveInterval::point(3.0).unwrap();
        let tempering = Tempering::new(&net, intervals).unwrap();
        let allotment = Allotment::new(
            &species,
            vec![PositiveInterval::positive_ray(), PositiveInterval::open(1.0, 2.0).unwrap()],
        )
        .unwrap();
        let sys = SubconfinedSystem::new(net, tempering, allotment, vec![1.0, 1.5]).unwrap();
        let proj = keep(&sys.network, &["A"]);
        let reduced = project_system(&sys, &proj).unwrap();
        let zero_to_a = reduced
            .network
            .reactions()
            .iter()
            .position(|r| r.reactant.coeffs() == [0.0] && r.product.coeffs() == [1.0])
            .unwrap();
        let iv = reduced.tempering.interval(zero_to_a);
        assert!((iv.lo - 3.0).abs() < 1e-12);
        assert!((iv.hi - 12.0).abs() < 1e-12);
        assert!(iv.lo_open && iv.hi_open);
    }

    #[test]
    fn zero_exponent_leaves_tempering_unchanged() {
        let sys = lv_reversed_system_bounded_b();
        let proj = keep(&sys.network, &["A"]);
        let reduced = project_system(&sys, &proj).unwrap();
        // 2A -> A has no B in its reactant, so kappa' = kappa = [1,1]
        let idx = reduced
            .network
            .reactions()
            .iter()
            .position(|r| r.reactant.coeffs() == [2.0])
            .unwrap();
        assert_eq!(*reduced.tempering.interval(idx), PositiveInterval::point(1.0).unwrap());
    }

    #[test]
    fn identity_projection_returns_the_system() {
        let sys = lv_reversed_system_bounded_b();
        let proj = keep(&sys.network, &["A", "B"]);
        let reduced = project_system(&sys, &proj).unwrap();
        assert_eq!(reduced, sys);
    }

    #[test]
    fn non_projectable_kept_set_errors() {
        let sys = unit_confined(lv_reversed_network(), vec![1.0, 1.0]);
        let proj = keep(&sys.network, &["A"]);
        match project_system(&sys, &proj) {
            Err(ReduceError::NotProjectable { name }) => assert_eq!(name, "B"),
            other => panic!("expected NotProjectable, got {other:?}"),
        }
    }

    #[test]
    fn merge_records_cover_all_sources() {
        let net = lotka_volterra_network();
        let tempering = Tempering::uniform(&net, 1.0).unwrap();
        let species = net.species().clone();
        let allotment = Allotment::new(
            &species,
            vec![PositiveInterval::open(0.5, 2.0).unwrap(), PositiveInterval::positive_ray()],
        )
        .unwrap();
        let sys = SubconfinedSystem::new(net, tempering, allotment, vec![1.0, 1.0]).unwrap();
        let proj = keep(&sys.network, &["B"]);
        let (reduced, records) = project_system_detailed(&sys, &proj).unwrap();
        let total: usize = records.iter().map(|m| m.sources.len()).sum();
        assert_eq!(total, sys.network.reactions().len());
        assert_eq!(records.len(), reduced.network.reactions().len());
    }

    #[test]
    fn reduced_stoichiometric_subspace_is_projected_span() {
        use crate::model::stoichiometric_basis;
        let net = lv_reversed_network();
        let proj = keep(&net, &["A"]);
        let reduced = reduce_network(&net, &proj);
        let reduced_rank = stoichiometric_basis(&reduced).len();
        // projected fluxes (-1), (1), (0) span a 1-dimensional space
        assert_eq!(reduced_rank, 1);
    }

    #[test]
    fn reduced_subspace_rank_matches_projected_fluxes_on_random_networks() {
        use crate::model::{flux, stoichiometric_basis};
        use crate::random::NetworkSampler;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let sampler = NetworkSampler::default();
        for _ in 0..50 {
            let net = sampler.network(&mut rng);
            let n = net.species().len();
            let kept: Vec<usize> = loop {
                let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                if !s.is_empty() {
                    break s;
                }
            };
            let proj = Projection::new(net.species(), &kept).unwrap();
            let reduced = reduce_network(&net, &proj);
            let reduced_rank = stoichiometric_basis(&reduced).len();
            // rank of the projections of the original reaction vectors
            let mut basis: Vec<Vec<f64>> = Vec::new();
            for r in net.reactions() {
                let mut v = proj.project_vector(&flux(r));
                let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                if scale == 0.0 {
                    continue;
                }
                for b in &basis {
                    let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= d * y;
                    }
                }
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 1e-10 * scale {
                    for x in v.iter_mut() {
                        *x /= norm;
                    }
                    basis.push(v);
                }
            }
            assert_eq!(reduced_rank, basis.len(), "kept {kept:?} of {net:?}");
        }
    }
}
