//! Seeded random network and system generators for property testing.
//!
//! Class-conditioned generators produce members of each projective class:
//! graph-defined classes by construction (adding reverse edges, wiring
//! cycles), the geometric classes by rejection against the exact deciders
//! with a constructive fallback (weakly reversible networks are endotactic;
//! strongly connected networks are strongly endotactic).

use crate::interval::PositiveInterval;
use crate::model::{
    Allotment, Complex, Reaction, ReactionNetwork, SpeciesSet, SubconfinedSystem, Tempering,
};
use crate::structure::{
    is_endotactic, is_reversible, is_strongly_connected, is_strongly_endotactic,
    is_weakly_reversible,
};
use rand::Rng;

#[derive(Debug, Clone)]
pub struct NetworkSampler {
    pub max_species: usize,
    pub max_reactions: usize,
    pub max_coeff: i64,
    pub allow_negative_coeffs: bool,
}

impl Default for NetworkSampler {
    fn default() -> Self {
        Self { max_species: 3, max_reactions: 6, max_coeff: 3, allow_negative_coeffs: false }
    }
}

const SPECIES_POOL: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

impl NetworkSampler {
    fn species<R: Rng>(&self, rng: &mut R) -> SpeciesSet {
        let n = rng.gen_range(1..=self.max_species.min(SPECIES_POOL.len()));
        SpeciesSet::new(SPECIES_POOL[..n].iter().copied()).unwrap()
    }

    fn complex<R: Rng>(&self, rng: &mut R, dim: usize) -> Complex {
        let lo = if self.allow_negative_coeffs { -self.max_coeff } else { 0 };
        let coeffs: Vec<f64> =
            (0..dim).map(|_| rng.gen_range(lo..=self.max_coeff) as f64).collect();
        Complex::new(coeffs).unwrap()
    }

    fn distinct_complexes<R: Rng>(&self, rng: &mut R, dim: usize, count: usize) -> Vec<Complex> {
        let mut out: Vec<Complex> = Vec::with_capacity(count);
        let mut guard = 0;
        while out.len() < count && guard < 1000 {
            guard += 1;
            let c = self.complex(rng, dim);
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// Unconstrained random network: random complexes, random directed
    /// reactions (self-loops allowed).
    pub fn network<R: Rng>(&self, rng: &mut R) -> ReactionNetwork {
        let species = self.species(rng);
        let dim = species.len();
        let ncomplex = rng.gen_range(2..=4);
        let pool = self.distinct_complexes(rng, dim, ncomplex);
        let nreact = rng.gen_range(1..=self.max_reactions);
        let reactions: Vec<Reaction> = (0..nreact)
            .map(|_| {
                let a = &pool[rng.gen_range(0..pool.len())];
                let b = &pool[rng.gen_range(0..pool.len())];
                Reaction::new(a.clone(), b.clone()).unwrap()
            })
            .collect();
        ReactionNetwork::from_reactions(species, reactions).unwrap()
    }

    /// Random reversible network: every drawn reaction ships with its
    /// reverse.
    pub fn reversible<R: Rng>(&self, rng: &mut R) -> ReactionNetwork {
        let species = self.species(rng);
        let dim = species.len();
        let pool_size = rng.gen_range(2..=4);
        let pool = self.distinct_complexes(rng, dim, pool_size);
        let npairs = rng.gen_range(1..=(self.max_reactions / 2).max(1));
        let mut reactions = Vec::new();
        for _ in 0..npairs {
            let a = pool[rng.gen_range(0..pool.len())].clone();
            let b = pool[rng.gen_range(0..pool.len())].clone();
            reactions.push(Reaction::new(a.clone(), b.clone()).unwrap());
            reactions.push(Reaction::new(b, a).unwrap());
        }
        ReactionNetwork::from_reactions(species, reactions).unwrap()
    }

    /// Random strongly connected network: a directed cycle through distinct
    /// complexes, optionally with extra chords (which preserve strong
    /// connectivity).
    pub fn strongly_connected<R: Rng>(&self, rng: &mut R) -> ReactionNetwork {
        let species = self.species(rng);
        let dim = species.len();
        let len = rng.gen_range(1..=4.min(self.max_reactions));
        let pool = self.distinct_complexes(rng, dim, len);
        let mut reactions = Vec::new();
        for i in 0..pool.len() {
            let j = (i + 1) % pool.len();
            if pool.len() > 1 || rng.gen_bool(0.5) {
                reactions.push(Reaction::new(pool[i].clone(), pool[j].clone()).unwrap());
            }
        }
        if reactions.is_empty() {
            reactions.push(Reaction::new(pool[0].clone(), pool[0].clone()).unwrap());
        }
        while reactions.len() < self.max_reactions && rng.gen_bool(0.3) {
            let a = pool[rng.gen_range(0..pool.len())].clone();
            let b = pool[rng.gen_range(0..pool.len())].clone();
            reactions.push(Reaction::new(a, b).unwrap());
        }
        ReactionNetwork::from_reactions(species, reactions).unwrap()
    }

    /// Random weakly reversible network: a union of directed cycles.
    pub fn weakly_reversible<R: Rng>(&self, rng: &mut R) -> ReactionNetwork {
        let species = self.species(rng);
        let dim = species.len();
        let mut reactions = Vec::new();
        let ncycles = rng.gen_range(1..=2);
        for _ in 0..ncycles {
            let len = rng.gen_range(1..=3);
            let pool = self.distinct_complexes(rng, dim, len);
            for i in 0..pool.len() {
                let j = (i + 1) % pool.len();
                reactions.push(Reaction::new(pool[i].clone(), pool[j].clone()).unwrap());
            }
        }
        ReactionNetwork::from_reactions(species, reactions).unwrap()
    }

    /// Random endotactic network: rejection sampling over unconstrained
    /// draws, falling back to a weakly reversible network (always
    /// endotactic) when the budget runs out.
    pub fn endotactic<R: Rng>(&self, rng: &mut R) -> ReactionNetwork {
        if rng.gen_bool(0.5) {
            return self.weakly_reversible(rng);
        }
        for _ in 0..200 {
            let net = self.network(rng);
            if matches!(is_endotactic(&net), Ok(d) if d.holds) {
                return net;
            }
        }
        self.weakly_reversible(rng)
    }

    /// Random strongly endotactic network: rejection sampling with a
    /// strongly connected fallback.
    pub fn strongly_endotactic<R: Rng>(&self, rng: &mut R) -> ReactionNetwork {
        if rng.gen_bool(0.5) {
            return self.strongly_connected(rng);
        }
        for _ in 0..200 {
            let net = self.network(rng);
            if matches!(is_strongly_endotactic(&net), Ok(d) if d.holds) {
                return net;
            }
        }
        self.strongly_connected(rng)
    }

    /// Random subconfined system over a random network: compact random
    /// temperings and an allotment bounding every species, so that every
    /// nonempty kept set is projectable.
    pub fn bounded_system<R: Rng>(&self, rng: &mut R) -> SubconfinedSystem {
        let net = self.network(rng);
        let intervals: Vec<PositiveInterval> = net
            .reactions()
            .iter()
            .map(|_| {
                let lo = rng.gen_range(0.1..2.0);
                let width = rng.gen_range(0.0..2.0);
                PositiveInterval::closed(lo, lo + width).unwrap()
            })
            .collect();
        let tempering = Tempering::new(&net, intervals).unwrap();
        let species = net.species().clone();
        let allot: Vec<PositiveInterval> = (0..species.len())
            .map(|_| {
                let lo = rng.gen_range(0.1..0.5);
                let hi = rng.gen_range(2.0..5.0);
                PositiveInterval::open(lo, hi).unwrap()
            })
            .collect();
        let base_point: Vec<f64> =
            allot.iter().map(|iv| rng.gen_range(iv.lo.max(0.5)..iv.hi.min(2.0))).collect();
        let allotment = Allotment::new(&species, allot).unwrap();
        SubconfinedSystem::new(net, tempering, allotment, base_point).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkClass {
    Integer,
    Chemical,
    Reversible,
    StronglyConnected,
    WeaklyReversible,
    Endotactic,
    StronglyEndotactic,
}

pub const ALL_CLASSES: [NetworkClass; 7] = [
    NetworkClass::Integer,
    NetworkClass::Chemical,
    NetworkClass::Reversible,
    NetworkClass::StronglyConnected,
    NetworkClass::WeaklyReversible,
    NetworkClass::Endotactic,
    NetworkClass::StronglyEndotactic,
];

impl NetworkClass {
    pub fn random_member<R: Rng>(&self, rng: &mut R, sampler: &NetworkSampler) -> ReactionNetwork {
        match self {
            NetworkClass::Integer => {
                let s = NetworkSampler { allow_negative_coeffs: true, ..sampler.clone() };
                s.network(rng)
            }
            NetworkClass::Chemical => sampler.network(rng),
            NetworkClass::Reversible => sampler.reversible(rng),
            NetworkClass::StronglyConnected => sampler.strongly_connected(rng),
            NetworkClass::WeaklyReversible => sampler.weakly_reversible(rng),
            NetworkClass::Endotactic => sampler.endotactic(rng),
            NetworkClass::StronglyEndotactic => sampler.strongly_endotactic(rng),
        }
    }

    /// Exact membership test via the deciders.
    pub fn contains(&self, net: &ReactionNetwork) -> bool {
        match self {
            NetworkClass::Integer => net.is_integer(),
            NetworkClass::Chemical => net.is_chemical(),
            NetworkClass::Reversible => is_reversible(net),
            NetworkClass::StronglyConnected => is_strongly_connected(net),
            NetworkClass::WeaklyReversible => is_weakly_reversible(net),
            NetworkClass::Endotactic => is_endotactic(net).map(|d| d.holds).unwrap_or(false),
            NetworkClass::StronglyEndotactic => {
                is_strongly_endotactic(net).map(|d| d.holds).unwrap_or(false)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NetworkClass::Integer => "integer",
            NetworkClass::Chemical => "chemical",
            NetworkClass::Reversible => "reversible",
            NetworkClass::StronglyConnected => "strongly_connected",
            NetworkClass::WeaklyReversible => "weakly_reversible",
            NetworkClass::Endotactic => "endotactic",
            NetworkClass::StronglyEndotactic => "strongly_endotactic",
        }
    }
}
