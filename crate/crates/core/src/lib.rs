//! Reaction networks with interval-valued rate constants, viewed through
//! three lenses:
//!
//! * **Structure** — graph classification (reversible, weakly reversible,
//!   strongly connected) and exact geometric classification (endotactic,
//!   strongly endotactic) by linear-feasibility enumeration over sweep
//!   directions.
//! * **Reduction** — the species-removal projection on networks and on
//!   whole subconfined systems, including the induced transform of rate
//!   intervals by interval powers of removed-species allotments.
//! * **Dynamics** — mass-action differential inclusions: fiber membership,
//!   tempered rate paths, fixed-step RK4 trajectories, and hypercube-side
//!   diagnostics (block factorization, persistence, repulsion, permanence).
//!
//! All state vectors live in the strictly positive orthant; the hypercube
//! side uses the componentwise diffeomorphism `x -> x / (1 + x)`.

pub mod cube;
pub mod diagnostics;
pub mod dynamics;
pub mod interval;
pub mod linfeas;
pub mod model;
pub mod random;
pub mod reduce;
pub mod samples;
pub mod structure;

pub use interval::PositiveInterval;
pub use model::{
    Allotment, Complex, ModelError, Reaction, ReactionNetwork, SpeciesSet, SubconfinedSystem,
    Tempering,
};
