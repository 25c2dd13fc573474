//! Bundled example networks and systems used throughout the tests and the
//! command-line fixtures.

use crate::interval::PositiveInterval;
use crate::model::{
    Allotment, Complex, Reaction, ReactionNetwork, SpeciesSet, SubconfinedSystem, Tempering,
};

fn cx(coeffs: &[f64]) -> Complex {
    Complex::new(coeffs.to_vec()).unwrap()
}

fn rx(reactant: &[f64], product: &[f64]) -> Reaction {
    Reaction::new(cx(reactant), cx(product)).unwrap()
}

/// Lotka-Volterra: `A -> 2A`, `A + B -> 2B`, `B -> 0`. Not endotactic.
pub fn lotka_volterra_network() -> ReactionNetwork {
    let species = SpeciesSet::new(["A", "B"]).unwrap();
    ReactionNetwork::from_reactions(
        species,
        vec![
            rx(&[1.0, 0.0], &[2.0, 0.0]),
            rx(&[1.0, 1.0], &[0.0, 2.0]),
            rx(&[0.0, 1.0], &[0.0, 0.0]),
        ],
    )
    .unwrap()
}

/// Reversed Lotka-Volterra: `2A -> A`, `2B -> A + B`, `0 -> B`. Strongly
/// endotactic.
pub fn lv_reversed_network() -> ReactionNetwork {
    let species = SpeciesSet::new(["A", "B"]).unwrap();
    ReactionNetwork::from_reactions(
        species,
        vec![
            rx(&[2.0, 0.0], &[1.0, 0.0]),
            rx(&[0.0, 2.0], &[1.0, 1.0]),
            rx(&[0.0, 0.0], &[0.0, 1.0]),
        ],
    )
    .unwrap()
}

/// Reversible pair `0 <-> A`, `A + B <-> 2B`: reversible (hence weakly
/// reversible and endotactic) but not strongly endotactic.
pub fn reversible_pair_network() -> ReactionNetwork {
    let species = SpeciesSet::new(["A", "B"]).unwrap();
    ReactionNetwork::from_reactions(
        species,
        vec![
            rx(&[0.0, 0.0], &[1.0, 0.0]),
            rx(&[1.0, 0.0], &[0.0, 0.0]),
            rx(&[1.0, 1.0], &[0.0, 2.0]),
            rx(&[0.0, 2.0], &[1.0, 1.0]),
        ],
    )
    .unwrap()
}

/// Three-cycle `A -> B -> C -> A`: strongly connected.
pub fn cycle3_network() -> ReactionNetwork {
    let species = SpeciesSet::new(["A", "B", "C"]).unwrap();
    ReactionNetwork::from_reactions(
        species,
        vec![
            rx(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]),
            rx(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]),
            rx(&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]),
        ],
    )
    .unwrap()
}

/// Isomerization `A <-> B`.
pub fn isomerization_network() -> ReactionNetwork {
    let species = SpeciesSet::new(["A", "B"]).unwrap();
    ReactionNetwork::from_reactions(
        species,
        vec![rx(&[1.0, 0.0], &[0.0, 1.0]), rx(&[0.0, 1.0], &[1.0, 0.0])],
    )
    .unwrap()
}

/// Production only: `0 -> A`.
pub fn production_network() -> ReactionNetwork {
    let species = SpeciesSet::new(["A"]).unwrap();
    ReactionNetwork::from_reactions(species, vec![rx(&[0.0], &[1.0])]).unwrap()
}

/// Decay only: `A -> 0`.
pub fn decay_network() -> ReactionNetwork {
    let species = SpeciesSet::new(["A"]).unwrap();
    ReactionNetwork::from_reactions(species, vec![rx(&[1.0], &[0.0])]).unwrap()
}

/// Birth-death `0 <-> A` (production first, decay second).
pub fn birth_death_network() -> ReactionNetwork {
    let species = SpeciesSet::new(["A"]).unwrap();
    ReactionNetwork::from_reactions(species, vec![rx(&[0.0], &[1.0]), rx(&[1.0], &[0.0])])
        .unwrap()
}

/// Confined system with unit point rates and the given base point.
pub fn unit_confined(net: ReactionNetwork, base_point: Vec<f64>) -> SubconfinedSystem {
    let tempering = Tempering::uniform(&net, 1.0).unwrap();
    SubconfinedSystem::confined(net, tempering, base_point).unwrap()
}

/// Reversed Lotka-Volterra system with unit rates and the `B` concentration
/// allotted to `(1, 2)`, so that projecting away `B` is admissible.
pub fn lv_reversed_system_bounded_b() -> SubconfinedSystem {
    let net = lv_reversed_network();
    let tempering = Tempering::uniform(&net, 1.0).unwrap();
    let species = net.species().clone();
    let allotment = Allotment::new(
        &species,
        vec![PositiveInterval::positive_ray(), PositiveInterval::open(1.0, 2.0).unwrap()],
    )
    .unwrap();
    SubconfinedSystem::new(net, tempering, allotment, vec![1.0, 1.0]).unwrap()
}

/// Birth-death system `0 <-> A` with both rates tempered to `[1, 2]`.
/// The band `[1/2, 2]` is forward-invariant for every admissible rate path.
pub fn birth_death_band_system() -> SubconfinedSystem {
    let net = birth_death_network();
    let iv = PositiveInterval::closed(1.0, 2.0).unwrap();
    let tempering = Tempering::new(&net, vec![iv, iv]).unwrap();
    SubconfinedSystem::confined(net, tempering, vec![1.0]).unwrap()
}
