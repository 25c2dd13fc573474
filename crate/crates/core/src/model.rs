//! Domain model: species, complexes, reactions, networks, temperings,
//! allotments, and subconfined systems.
//!
//! Everything here is immutable after construction. Complexes compare
//! bitwise (after normalizing `-0.0` to `0.0` at construction), so complex
//! and reaction identity is exact rather than epsilon-merged.

use crate::interval::PositiveInterval;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("species set must be nonempty")]
    EmptySpecies,
    #[error("invalid species name: {0:?}")]
    BadSpeciesName(String),
    #[error("duplicate species name: {0:?}")]
    DuplicateSpecies(String),
    #[error("complex has non-finite coefficient")]
    NonFiniteCoefficient,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("tempering must cover exactly the reaction set: expected {expected} intervals, got {got}")]
    TemperingArity { expected: usize, got: usize },
    #[error("tempering interval for reaction {index} must be bounded away from 0 and inf")]
    TemperingUnbounded { index: usize },
    #[error("allotment must cover exactly the species set: expected {expected} intervals, got {got}")]
    AllotmentArity { expected: usize, got: usize },
    #[error("base point must be strictly positive and finite at component {index}")]
    BadBasePoint { index: usize },
    #[error("base point component {index} lies outside the closure of the allotment hypercube")]
    BasePointOutsideAllotment { index: usize },
}

fn valid_species_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered set of distinct species identifiers. The order is canonical and
/// fixed at construction; vectors over species are indexed by it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpeciesSet {
    names: Vec<String>,
}

impl SpeciesSet {
    pub fn new<I, S>(names: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(ModelError::EmptySpecies);
        }
        for (i, n) in names.iter().enumerate() {
            if !valid_species_name(n) {
                return Err(ModelError::BadSpeciesName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(ModelError::DuplicateSpecies(n.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A complex: a real vector of stoichiometric coefficients over a species
/// set. Entries must be finite; `-0.0` is normalized to `0.0` so that
/// bitwise equality coincides with numeric equality.
#[derive(Debug, Clone, Serialize)]
pub struct Complex {
    coeffs: Vec<f64>,
}

impl Complex {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, ModelError> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(ModelError::NonFiniteCoefficient);
        }
        let coeffs = coeffs.into_iter().map(|c| if c == 0.0 { 0.0 } else { c }).collect();
        Ok(Self { coeffs })
    }

    pub fn zero(dim: usize) -> Self {
        Self { coeffs: vec![0.0; dim] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_integer(&self) -> bool {
        self.coeffs.iter().all(|c| c.fract() == 0.0)
    }

    pub fn is_chemical(&self) -> bool {
        self.coeffs.iter().all(|c| c.fract() == 0.0 && *c >= 0.0)
    }

    fn bits(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.to_bits()).collect()
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.bits() == other.bits()
    }
}

impl Eq for Complex {}

/// A directed reaction between two complexes over the same species set.
/// Trivial reactions (reactant equal to product) are permitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reaction {
    pub reactant: Complex,
    pub product: Complex,
}

impl Reaction {
    pub fn new(reactant: Complex, product: Complex) -> Result<Self, ModelError> {
        if reactant.dim() != product.dim() {
            return Err(ModelError::DimensionMismatch {
                expected: reactant.dim(),
                got: product.dim(),
            });
        }
        Ok(Self { reactant, product })
    }

    pub fn is_trivial(&self) -> bool {
        self.reactant == self.product
    }
}

/// Reaction vector of a reaction: product minus reactant, componentwise.
pub fn flux(r: &Reaction) -> Vec<f64> {
    r.product
        .coeffs()
        .iter()
        .zip(r.reactant.coeffs())
        .map(|(p, s)| p - s)
        .collect()
}

/// A finite reaction network: species, a set of complexes, and a set of
/// directed reactions between them. Self-loops and isolated complexes are
/// allowed. Construction deduplicates complexes and reactions (exact
/// coefficient equality) and unions in any reaction endpoint not already
/// listed as a complex, so the member invariant holds by construction.
#[derive(Debug, Clone, Serialize)]
pub struct ReactionNetwork {
    species: SpeciesSet,
    complexes: Vec<Complex>,
    reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    pub fn new(
        species: SpeciesSet,
        complexes: Vec<Complex>,
        reactions: Vec<Reaction>,
    ) -> Result<Self, ModelError> {
        let dim = species.len();
        let mut cset: Vec<Complex> = Vec::new();
        let push_complex = |c: &Complex, cset: &mut Vec<Complex>| -> Result<usize, ModelError> {
            if c.dim() != dim {
                return Err(ModelError::DimensionMismatch { expected: dim, got: c.dim() });
            }
            if let Some(i) = cset.iter().position(|x| x == c) {
                Ok(i)
            } else {
                cset.push(c.clone());
                Ok(cset.len() - 1)
            }
        };
        for c in &complexes {
            push_complex(c, &mut cset)?;
        }
        let mut rset: Vec<Reaction> = Vec::new();
        for r in reactions {
            push_complex(&r.reactant, &mut cset)?;
            push_complex(&r.product, &mut cset)?;
            if !rset.contains(&r) {
                rset.push(r);
            }
        }
        Ok(Self { species, complexes: cset, reactions: rset })
    }

    /// Network generated by its reactions alone (complex set is the union
    /// of reactant and product complexes).
    pub fn from_reactions(species: SpeciesSet, reactions: Vec<Reaction>) -> Result<Self, ModelError> {
        Self::new(species, Vec::new(), reactions)
    }

    pub fn species(&self) -> &SpeciesSet {
        &self.species
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn complex_index(&self, c: &Complex) -> Option<usize> {
        self.complexes.iter().position(|x| x == c)
    }

    pub fn is_integer(&self) -> bool {
        self.complexes.iter().all(Complex::is_integer)
    }

    pub fn is_chemical(&self) -> bool {
        self.complexes.iter().all(Complex::is_chemical)
    }
}

/// Set equality: same species in the same order, same complex set, and same
/// reaction set, independent of listing order.
impl PartialEq for ReactionNetwork {
    fn eq(&self, other: &Self) -> bool {
        if self.species != other.species {
            return false;
        }
        self.complexes.len() == other.complexes.len()
            && self.complexes.iter().all(|c| other.complexes.contains(c))
            && self.reactions.len() == other.reactions.len()
            && self.reactions.iter().all(|r| other.reactions.contains(r))
    }
}

/// Per-reaction positive rate interval, index-aligned with the network's
/// reaction list. Every interval must be bounded away from 0 and inf;
/// openness flags are carried along but the bounds are what downstream
/// feasibility checks consume.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tempering {
    intervals: Vec<PositiveInterval>,
}

impl Tempering {
    pub fn new(net: &ReactionNetwork, intervals: Vec<PositiveInterval>) -> Result<Self, ModelError> {
        if intervals.len() != net.reactions().len() {
            return Err(ModelError::TemperingArity {
                expected: net.reactions().len(),
                got: intervals.len(),
            });
        }
        for (i, iv) in intervals.iter().enumerate() {
            if !iv.is_bounded() {
                return Err(ModelError::TemperingUnbounded { index: i });
            }
        }
        Ok(Self { intervals })
    }

    /// The same point rate for every reaction.
    pub fn uniform(net: &ReactionNetwork, rate: f64) -> Result<Self, ModelError> {
        let iv = PositiveInterval::point(rate)
            .map_err(|_| ModelError::TemperingUnbounded { index: 0 })?;
        Self::new(net, vec![iv; net.reactions().len()])
    }

    pub fn intervals(&self) -> &[PositiveInterval] {
        &self.intervals
    }

    pub fn interval(&self, reaction: usize) -> &PositiveInterval {
        &self.intervals[reaction]
    }
}

/// Per-species positive concentration interval, index-aligned with the
/// species set. The componentwise product of the intervals is the allotment
/// hypercube.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Allotment {
    intervals: Vec<PositiveInterval>,
}

impl Allotment {
    pub fn new(species: &SpeciesSet, intervals: Vec<PositiveInterval>) -> Result<Self, ModelError> {
        if intervals.len() != species.len() {
            return Err(ModelError::AllotmentArity {
                expected: species.len(),
                got: intervals.len(),
            });
        }
        Ok(Self { intervals })
    }

    /// The confined special case: every species gets `(0, inf)`, so the
    /// allotment hypercube is the whole positive orthant.
    pub fn unconstrained(species: &SpeciesSet) -> Self {
        Self { intervals: vec![PositiveInterval::positive_ray(); species.len()] }
    }

    pub fn intervals(&self) -> &[PositiveInterval] {
        &self.intervals
    }

    pub fn interval(&self, species: usize) -> &PositiveInterval {
        &self.intervals[species]
    }

    /// Membership of a point in the closed hull of the allotment hypercube.
    pub fn closure_contains(&self, x: &[f64]) -> bool {
        x.len() == self.intervals.len()
            && x.iter().zip(&self.intervals).all(|(v, iv)| iv.closure_contains(*v))
    }
}

/// A network together with a tempering, an allotment, and a strictly
/// positive base point. The base point encodes an invariant polyhedron
/// (its translate by the stoichiometric subspace, within the nonnegative
/// orthant); the allotment hypercube bounds the domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubconfinedSystem {
    pub network: ReactionNetwork,
    pub tempering: Tempering,
    pub allotment: Allotment,
    pub base_point: Vec<f64>,
}

impl SubconfinedSystem {
    pub fn new(
        network: ReactionNetwork,
        tempering: Tempering,
        allotment: Allotment,
        base_point: Vec<f64>,
    ) -> Result<Self, ModelError> {
        if tempering.intervals().len() != network.reactions().len() {
            return Err(ModelError::TemperingArity {
                expected: network.reactions().len(),
                got: tempering.intervals().len(),
            });
        }
        if allotment.intervals().len() != network.species().len() {
            return Err(ModelError::AllotmentArity {
                expected: network.species().len(),
                got: allotment.intervals().len(),
            });
        }
        if base_point.len() != network.species().len() {
            return Err(ModelError::DimensionMismatch {
                expected: network.species().len(),
                got: base_point.len(),
            });
        }
        for (i, v) in base_point.iter().enumerate() {
            if !(v.is_finite() && *v > 0.0) {
                return Err(ModelError::BadBasePoint { index: i });
            }
            if !allotment.interval(i).closure_contains(*v) {
                return Err(ModelError::BasePointOutsideAllotment { index: i });
            }
        }
        Ok(Self { network, tempering, allotment, base_point })
    }

    /// Confined system: allotment is the whole positive orthant.
    pub fn confined(
        network: ReactionNetwork,
        tempering: Tempering,
        base_point: Vec<f64>,
    ) -> Result<Self, ModelError> {
        let allotment = Allotment::unconstrained(network.species());
        Self::new(network, tempering, allotment, base_point)
    }
}

const PIVOT_RELATIVE_THRESHOLD: f64 = 1e-10;

/// Orthonormal basis of the stoichiometric subspace (the span of all
/// reaction vectors), by modified Gram-Schmidt with a relative pivot
/// threshold. Networks whose reactions are all trivial get an empty basis.
pub fn stoichiometric_basis(net: &ReactionNetwork) -> Vec<Vec<f64>> {
    let dim = net.species().len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for r in net.reactions() {
        let mut v = flux(r);
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            continue;
        }
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > PIVOT_RELATIVE_THRESHOLD * scale {
            for x in v.iter_mut() {
                *x /= norm;
            }
            basis.push(v);
            if basis.len() == dim {
                break;
            }
        }
    }
    basis
}

/// Component of `v` orthogonal to the span of an orthonormal basis.
pub fn orthogonal_component(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut out = v.to_vec();
    for b in basis {
        let dot: f64 = out.iter().zip(b).map(|(x, y)| x * y).sum();
        for (x, y) in out.iter_mut().zip(b) {
            *x -= dot * y;
        }
    }
    out
}

/// Membership of `x` in the invariant polyhedron of `x0`: `x` must be
/// componentwise nonnegative and `x - x0` must lie in the stoichiometric
/// subspace up to `tol` (Euclidean norm of the orthogonal component).
pub fn invariant_polyhedron_contains(
    net: &ReactionNetwork,
    x0: &[f64],
    x: &[f64],
    tol: f64,
) -> Result<bool, ModelError> {
    let dim = net.species().len();
    if x0.len() != dim {
        return Err(ModelError::DimensionMismatch { expected: dim, got: x0.len() });
    }
    if x.len() != dim {
        return Err(ModelError::DimensionMismatch { expected: dim, got: x.len() });
    }
    if x.iter().any(|v| *v < 0.0) {
        return Ok(false);
    }
    let basis = stoichiometric_basis(net);
    let diff: Vec<f64> = x.iter().zip(x0).map(|(a, b)| a - b).collect();
    let resid = orthogonal_component(&diff, &basis);
    let norm = resid.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(norm <= tol)
}

/// Norm of the component of `x - x0` orthogonal to the stoichiometric
/// subspace spanned by `basis` (orthonormal).
pub fn conservation_residual(basis: &[Vec<f64>], x0: &[f64], x: &[f64]) -> f64 {
    let diff: Vec<f64> = x.iter().zip(x0).map(|(a, b)| a - b).collect();
    let resid = orthogonal_component(&diff, basis);
    resid.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn two_species() -> SpeciesSet {
        SpeciesSet::new(["A", "B"]).unwrap()
    }

    fn cx(coeffs: &[f64]) -> Complex {
        Complex::new(coeffs.to_vec()).unwrap()
    }

    fn rx(reactant: &[f64], product: &[f64]) -> Reaction {
        Reaction::new(cx(reactant), cx(product)).unwrap()
    }

    #[test]
    fn species_validation() {
        assert!(SpeciesSet::new(Vec::<String>::new()).is_err());
        assert!(SpeciesSet::new(["A", "A"]).is_err());
        assert!(SpeciesSet::new(["1A"]).is_err());
        assert!(SpeciesSet::new(["A", "b_2"]).is_ok());
    }

    #[test]
    fn flux_of_lotka_volterra_reaction() {
        // A + B -> 2B over (A, B)
        let r = rx(&[1.0, 1.0], &[0.0, 2.0]);
        assert_eq!(flux(&r), vec![-1.0, 1.0]);
    }

    #[test]
    fn flux_of_trivial_reaction_is_zero() {
        let r = rx(&[0.0, 0.0], &[0.0, 0.0]);
        assert_eq!(flux(&r), vec![0.0, 0.0]);
    }

    #[test]
    fn flux_of_reversed_reaction() {
        let r = rx(&[0.0, 2.0], &[1.0, 1.0]);
        assert_eq!(flux(&r), vec![1.0, -1.0]);
    }

    #[test]
    fn flux_negates_under_reversal() {
        let fwd = rx(&[1.5, 0.0], &[0.25, 3.0]);
        let rev = rx(&[0.25, 3.0], &[1.5, 0.0]);
        let f = flux(&fwd);
        let g = flux(&rev);
        for (a, b) in f.iter().zip(&g) {
            assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn network_dedups_and_unions_endpoints() {
        let s = two_species();
        let net = ReactionNetwork::new(
            s,
            vec![cx(&[1.0, 0.0]), cx(&[1.0, 0.0])],
            vec![rx(&[1.0, 0.0], &[2.0, 0.0]), rx(&[1.0, 0.0], &[2.0, 0.0])],
        )
        .unwrap();
        assert_eq!(net.complexes().len(), 2);
        assert_eq!(net.reactions().len(), 1);
    }

    #[test]
    fn basis_single_direction() {
        let s = two_species();
        let net = ReactionNetwork::from_reactions(
            s,
            vec![rx(&[1.0, 0.0], &[0.0, 1.0]), rx(&[0.0, 1.0], &[1.0, 0.0])],
        )
        .unwrap();
        let basis = stoichiometric_basis(&net);
        assert_eq!(basis.len(), 1);
        let b = &basis[0];
        // proportional to (-1, 1)
        assert!((b[0] + b[1]).abs() < 1e-12);
    }

    #[test]
    fn basis_full_rank_for_reversed_lotka_volterra() {
        let net = crate::samples::lv_reversed_network();
        assert_eq!(stoichiometric_basis(&net).len(), 2);
    }

    #[test]
    fn basis_empty_for_trivial_reactions() {
        let s = two_species();
        let net = ReactionNetwork::from_reactions(s, vec![rx(&[1.0, 0.0], &[1.0, 0.0])]).unwrap();
        assert!(stoichiometric_basis(&net).is_empty());
    }

    #[test]
    fn basis_rank_bounded_by_dims() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let s = SpeciesSet::new(["A", "B", "C"]).unwrap();
            let nr = rng.gen_range(0..=5);
            let reactions: Vec<Reaction> = (0..nr)
                .map(|_| {
                    let a: Vec<f64> = (0..3).map(|_| rng.gen_range(0..4) as f64).collect();
                    let b: Vec<f64> = (0..3).map(|_| rng.gen_range(0..4) as f64).collect();
                    rx(&a, &b)
                })
                .collect();
            let n_reactions = reactions.len();
            let net = ReactionNetwork::from_reactions(s, reactions).unwrap();
            let rank = stoichiometric_basis(&net).len();
            assert!(rank <= 3.min(n_reactions.max(1)));
        }
    }

    #[test]
    fn polyhedron_conserves_sum_for_isomerization() {
        let s = two_species();
        let net = ReactionNetwork::from_reactions(
            s,
            vec![rx(&[1.0, 0.0], &[0.0, 1.0]), rx(&[0.0, 1.0], &[1.0, 0.0])],
        )
        .unwrap();
        let x0 = [1.0, 1.0];
        assert!(invariant_polyhedron_contains(&net, &x0, &[2.0, 0.0], 1e-9).unwrap());
        assert!(!invariant_polyhedron_contains(&net, &x0, &[1.0, 2.0], 1e-9).unwrap());
        assert!(invariant_polyhedron_contains(&net, &x0, &x0, 0.0).unwrap());
    }

    #[test]
    fn polyhedron_rejects_negative_points() {
        let s = two_species();
        let net = ReactionNetwork::from_reactions(
            s,
            vec![rx(&[1.0, 0.0], &[0.0, 1.0]), rx(&[0.0, 1.0], &[1.0, 0.0])],
        )
        .unwrap();
        assert!(!invariant_polyhedron_contains(&net, &[1.0, 1.0], &[3.0, -1.0], 1e-9).unwrap());
    }

    #[test]
    fn polyhedron_contains_random_span_displacements() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let net = crate::samples::lv_reversed_network();
        let basis = stoichiometric_basis(&net);
        let x0 = [2.0, 2.0];
        for _ in 0..100 {
            let mut x = x0.to_vec();
            for b in &basis {
                let c: f64 = rng.gen_range(-0.5..0.5);
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi += c * bi;
                }
            }
            if x.iter().all(|v| *v >= 0.0) {
                assert!(invariant_polyhedron_contains(&net, &x0, &x, 1e-9).unwrap());
            }
        }
    }

    #[test]
    fn tempering_requires_bounded_intervals() {
        let net = crate::samples::lv_reversed_network();
        let bad = vec![PositiveInterval::positive_ray(); 3];
        assert!(matches!(
            Tempering::new(&net, bad),
            Err(ModelError::TemperingUnbounded { .. })
        ));
    }

    #[test]
    fn base_point_must_lie_in_allotment_closure() {
        let net = crate::samples::lv_reversed_network();
        let tempering = Tempering::uniform(&net, 1.0).unwrap();
        let species = net.species().clone();
        let allotment = Allotment::new(
            &species,
            vec![
                PositiveInterval::positive_ray(),
                PositiveInterval::open(1.0, 2.0).unwrap(),
            ],
        )
        .unwrap();
        assert!(SubconfinedSystem::new(
            net.clone(),
            tempering.clone(),
            allotment.clone(),
            vec![1.0, 3.0]
        )
        .is_err());
        assert!(SubconfinedSystem::new(net, tempering, allotment, vec![1.0, 1.5]).is_ok());
    }
}
