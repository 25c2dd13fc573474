//! The projection morphisms on subconfined systems obey the functor laws:
//! keeping every species is the identity, and projecting in two stages
//! agrees with projecting directly (networks exactly, rate-interval
//! endpoints to 1e-12 relative).

use crn_core::random::NetworkSampler;
use crn_core::reduce::{project_system, Projection};
use crn_core::SubconfinedSystem;
use rand::{Rng, SeedableRng};

fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn assert_systems_match(two_stage: &SubconfinedSystem, direct: &SubconfinedSystem, ctx: &str) {
    assert_eq!(two_stage.network, direct.network, "{ctx}: networks differ");
    assert_eq!(two_stage.base_point, direct.base_point, "{ctx}: base points differ");
    assert_eq!(
        two_stage.allotment.intervals(),
        direct.allotment.intervals(),
        "{ctx}: allotments differ"
    );
    for (i, r) in direct.network.reactions().iter().enumerate() {
        let j = two_stage
            .network
            .reactions()
            .iter()
            .position(|q| q == r)
            .expect("equal networks share reactions");
        let a = two_stage.tempering.interval(j);
        let b = direct.tempering.interval(i);
        assert!(
            relative_close(a.lo, b.lo, 1e-12) && relative_close(a.hi, b.hi, 1e-12),
            "{ctx}: tempering mismatch on reaction {i}: {a:?} vs {b:?}"
        );
    }
}

#[test]
fn identity_law_is_exact() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(808);
    let sampler = NetworkSampler::default();
    for _ in 0..100 {
        let sys = sampler.bounded_system(&mut rng);
        let all: Vec<usize> = (0..sys.network.species().len()).collect();
        let proj = Projection::new(sys.network.species(), &all).unwrap();
        let projected = project_system(&sys, &proj).unwrap();
        assert_eq!(projected, sys);
    }
}

#[test]
fn composition_law_on_random_systems() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(909);
    let sampler = NetworkSampler { max_species: 3, ..Default::default() };
    let mut checked = 0;
    while checked < 100 {
        let sys = sampler.bounded_system(&mut rng);
        let n = sys.network.species().len();
        if n < 2 {
            continue;
        }
        // V subset of U subset of S, both nonempty, U proper when possible
        let u: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
        if u.is_empty() {
            continue;
        }
        let v: Vec<usize> = u.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        if v.is_empty() {
            continue;
        }
        checked += 1;

        let proj_u = Projection::new(sys.network.species(), &u).unwrap();
        let stage_one = project_system(&sys, &proj_u).unwrap();
        let names: Vec<&str> = v
            .iter()
            .map(|&i| sys.network.species().name(i))
            .collect();
        let proj_uv = Projection::by_names(stage_one.network.species(), &names).unwrap();
        let two_stage = project_system(&stage_one, &proj_uv).unwrap();

        let proj_v = Projection::new(sys.network.species(), &v).unwrap();
        let direct = project_system(&sys, &proj_v).unwrap();

        assert_systems_match(&two_stage, &direct, &format!("U={u:?} V={v:?}"));
    }
}

#[test]
fn composition_law_on_reversed_lv() {
    use crn_core::samples;
    let sys = samples::lv_reversed_system_bounded_b();
    let species = sys.network.species().clone();
    let proj_ab = Projection::by_names(&species, &["A", "B"]).unwrap();
    let stage_one = project_system(&sys, &proj_ab).unwrap();
    let proj_a2 = Projection::by_names(stage_one.network.species(), &["A"]).unwrap();
    let two_stage = project_system(&stage_one, &proj_a2).unwrap();
    let proj_a = Projection::by_names(&species, &["A"]).unwrap();
    let direct = project_system(&sys, &proj_a).unwrap();
    assert_systems_match(&two_stage, &direct, "lv-rev A");
}
