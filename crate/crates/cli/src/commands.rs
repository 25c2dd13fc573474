//! Command implementations. Each returns the JSON report document plus the
//! process exit code: 0 success/pass, 1 property check false, 2
//! parse/usage error, 3 numerical indeterminacy (the last two surface as
//! errors rather than return values).

use crate::format::{self, NetworkDocument};
use crate::report::{
    ClassificationPayload, MergeEntry, Payload, ProjectivityCheck, ReductionPayload,
    ReportDocument, SimulationPayload, SourceInterval, VertexicalPayload,
};
use crate::CliError;
use crn_core::diagnostics::{factorization_target, verify_factorization_face_against};
use crn_core::dynamics::{sample_rate_path, simulate, RateScheme};
use crn_core::interval::PositiveInterval;
use crn_core::model::{
    conservation_residual, stoichiometric_basis, SubconfinedSystem, Tempering,
};
use crn_core::reduce::{project_system_detailed, Projection};
use crn_core::structure::{classify_with_limit, linkage_classes};
use crn_core::cube::Face;

pub struct CommandOutcome {
    pub document: ReportDocument,
    pub exit_code: i32,
    /// One-line human summary per item, printed to stderr.
    pub summary: Vec<String>,
}

pub fn parse_scheme(name: &str) -> Result<RateScheme, CliError> {
    match name {
        "midpoint" => Ok(RateScheme::Midpoint),
        "uniform-random" => Ok(RateScheme::UniformRandom),
        "extremal-cycling" => Ok(RateScheme::ExtremalCycling),
        other => Err(CliError::Usage(format!(
            "unknown scheme {other:?} (expected midpoint, uniform-random, or extremal-cycling)"
        ))),
    }
}

fn scheme_name(scheme: RateScheme) -> &'static str {
    match scheme {
        RateScheme::Midpoint => "midpoint",
        RateScheme::UniformRandom => "uniform-random",
        RateScheme::ExtremalCycling => "extremal-cycling",
    }
}

pub struct CheckArgs {
    pub verify_projective: bool,
    pub limit: usize,
}

pub fn cmd_check(
    input: &str,
    doc: &NetworkDocument,
    args: &CheckArgs,
    command: String,
) -> Result<CommandOutcome, CliError> {
    let net = &doc.system.network;
    let classification = classify_with_limit(net, args.limit)?;
    let mut summary = vec![
        format!("integer: {}", classification.integer),
        format!("chemical: {}", classification.chemical),
        format!("reversible: {}", classification.reversible),
        format!("strongly_connected: {}", classification.strongly_connected),
        format!("weakly_reversible: {}", classification.weakly_reversible),
        format!("endotactic: {}", classification.endotactic),
        format!("strongly_endotactic: {}", classification.strongly_endotactic),
    ];

    let mut exit_code = 0;
    let projectivity = if args.verify_projective && net.species().len() > 1 {
        let source_flags = [
            classification.integer,
            classification.chemical,
            classification.reversible,
            classification.strongly_connected,
            classification.weakly_reversible,
            classification.endotactic,
            classification.strongly_endotactic,
        ];
        let mut checks = Vec::new();
        for removed in 0..net.species().len() {
            let kept: Vec<usize> =
                (0..net.species().len()).filter(|&i| i != removed).collect();
            let proj = Projection::new(net.species(), &kept)?;
            let reduced = crn_core::reduce::reduce_network(net, &proj);
            let reduced_class = classify_with_limit(&reduced, args.limit)?;
            let reduced_flags = [
                reduced_class.integer,
                reduced_class.chemical,
                reduced_class.reversible,
                reduced_class.strongly_connected,
                reduced_class.weakly_reversible,
                reduced_class.endotactic,
                reduced_class.strongly_endotactic,
            ];
            let preserved = source_flags
                .iter()
                .zip(&reduced_flags)
                .all(|(src, red)| !*src || *red);
            if !preserved {
                exit_code = 1;
            }
            summary.push(format!(
                "projective without {}: {}",
                net.species().name(removed),
                if preserved { "preserved" } else { "VIOLATED" }
            ));
            checks.push(ProjectivityCheck {
                removed_species: net.species().name(removed).to_string(),
                classification: reduced_class,
                preserved,
            });
        }
        Some(checks)
    } else {
        None
    };

    let payload = Payload::Classification(ClassificationPayload {
        classification,
        linkage_class_count: linkage_classes(net).len(),
        projectivity,
    });
    Ok(CommandOutcome {
        document: ReportDocument::new(command, input, payload),
        exit_code,
        summary,
    })
}

pub fn cmd_reduce(
    input: &str,
    doc: &NetworkDocument,
    keep: &[String],
    command: String,
) -> Result<CommandOutcome, CliError> {
    let names: Vec<&str> = keep.iter().map(String::as_str).collect();
    let proj = Projection::by_names(doc.system.network.species(), &names)?;
    let (reduced, records) = project_system_detailed(&doc.system, &proj)?;
    let species = reduced.network.species().clone();
    let reduced_doc = NetworkDocument { system: reduced, repulsing: doc.repulsing.clone() };
    let network_file = format::serialize(&reduced_doc);
    let merges: Vec<MergeEntry> = records
        .iter()
        .map(|m| {
            let hull = *reduced_doc.system.tempering.interval(m.reduced_reaction);
            MergeEntry {
                reduced_reaction: format::format_reaction(
                    &reduced_doc.system.network.reactions()[m.reduced_reaction],
                    &species,
                ),
                hull,
                sources: m
                    .sources
                    .iter()
                    .map(|(i, iv)| SourceInterval {
                        reaction: format::format_reaction(
                            &doc.system.network.reactions()[*i],
                            doc.system.network.species(),
                        ),
                        interval: *iv,
                    })
                    .collect(),
            }
        })
        .collect();
    let summary = network_file.lines().map(str::to_string).collect();
    let payload = Payload::Reduction(ReductionPayload {
        kept: keep.to_vec(),
        network_file,
        merges,
    });
    Ok(CommandOutcome {
        document: ReportDocument::new(command, input, payload),
        exit_code: 0,
        summary,
    })
}

pub struct SimArgs {
    pub t_end: f64,
    pub h: f64,
    pub dt: f64,
    pub scheme: RateScheme,
    pub seed: u64,
}

pub struct SimulationOutput {
    pub outcome: CommandOutcome,
    pub csv: String,
}

pub fn cmd_simulate(
    input: &str,
    doc: &NetworkDocument,
    args: &SimArgs,
    csv_path: Option<String>,
    command: String,
) -> Result<SimulationOutput, CliError> {
    let sys = &doc.system;
    let path = sample_rate_path(sys, args.dt, args.t_end, args.seed, args.scheme)?;
    let traj = simulate(sys, &sys.base_point, &path, args.t_end, args.h)?;

    let mut csv = String::from("t");
    for name in sys.network.species().names() {
        csv.push_str(",x_");
        csv.push_str(name);
    }
    csv.push('\n');
    for (t, state) in traj.times.iter().zip(&traj.states) {
        csv.push_str(&format!("{t}"));
        for v in state {
            csv.push_str(&format!(",{v}"));
        }
        csv.push('\n');
    }

    let basis = stoichiometric_basis(&sys.network);
    let max_resid = traj
        .states
        .iter()
        .map(|s| conservation_residual(&basis, &sys.base_point, s))
        .fold(0.0f64, f64::max);

    let aborted = traj.status.is_abort();
    let summary = vec![
        format!("samples: {}", traj.states.len()),
        format!("status: {:?}", traj.status),
        format!("final state: {:?}", traj.states.last().unwrap()),
        format!("max conservation residual: {max_resid:.3e}"),
    ];
    let payload = Payload::Simulation(SimulationPayload {
        t_end: args.t_end,
        h: args.h,
        dt: args.dt,
        scheme: scheme_name(args.scheme).to_string(),
        seed: args.seed,
        status: traj.status.clone(),
        n_samples: traj.states.len(),
        final_time: *traj.times.last().unwrap(),
        final_state: traj.states.last().unwrap().clone(),
        max_conservation_residual: max_resid,
        warnings: traj.warnings.clone(),
        csv_path,
    });
    Ok(SimulationOutput {
        outcome: CommandOutcome {
            document: ReportDocument::new(command, input, payload),
            exit_code: if aborted { 1 } else { 0 },
            summary,
        },
        csv,
    })
}

pub struct VertexicalArgs {
    pub keep: Vec<String>,
    pub eps: f64,
    pub tol: f64,
    pub sim: SimArgs,
    /// Negative-control aid: scale the projected rate intervals about
    /// their midpoints before checking (values below 1 shrink them).
    pub tamper_scale: Option<f64>,
}

pub fn cmd_verify_vertexical(
    input: &str,
    doc: &NetworkDocument,
    args: &VertexicalArgs,
    command: String,
) -> Result<CommandOutcome, CliError> {
    let sys = &doc.system;
    let names: Vec<&str> = args.keep.iter().map(String::as_str).collect();
    let proj = Projection::by_names(sys.network.species(), &names)?;
    if proj.kept().len() >= sys.network.species().len() {
        return Err(CliError::Usage(
            "--keep must name a proper nonempty subset of the species".into(),
        ));
    }

    let path = sample_rate_path(sys, args.sim.dt, args.sim.t_end, args.sim.seed, args.sim.scheme)?;
    let traj = simulate(sys, &sys.base_point, &path, args.sim.t_end, args.sim.h)?;

    let mut target = factorization_target(sys, &proj, args.eps)?;
    if let Some(scale) = args.tamper_scale {
        let tampered: Vec<PositiveInterval> = target
            .tempering
            .intervals()
            .iter()
            .map(|iv| {
                let mid = iv.midpoint();
                let half = 0.5 * (iv.hi - iv.lo) * scale;
                let lo = (mid - half).max(f64::MIN_POSITIVE);
                PositiveInterval::closed(lo, mid + half)
                    .expect("scaled interval stays valid")
            })
            .collect();
        target = SubconfinedSystem::new(
            target.network.clone(),
            Tempering::new(&target.network, tampered)?,
            target.allotment.clone(),
            target.base_point.clone(),
        )?;
    }

    let mut faces = Vec::new();
    for mask in 0u64..(1u64 << proj.kept().len()) {
        let kept_vertex: Vec<f64> = (0..proj.kept().len())
            .map(|b| if mask & (1 << b) != 0 { 1.0 } else { 0.0 })
            .collect();
        let face = Face::collapsed_by(&proj, &kept_vertex)?;
        faces.push(verify_factorization_face_against(
            sys, &traj, &face, args.eps, args.tol, &target,
        )?);
    }

    let segments_total: usize = faces.iter().map(|f| f.segments.len()).sum();
    let evaluated: usize = faces.iter().map(|f| f.evaluated_samples).sum();
    let max_fiber = faces.iter().map(|f| f.max_fiber_residual).fold(0.0f64, f64::max);
    let pass = faces.iter().all(|f| f.pass);
    let summary = vec![
        format!("faces checked: {}", faces.len()),
        format!("block segments: {segments_total}"),
        format!("evaluated samples: {evaluated}"),
        format!("max fiber residual: {max_fiber:.3e}"),
        format!("factorization: {}", if pass { "pass" } else { "FAIL" }),
    ];
    let payload = Payload::Vertexical(VertexicalPayload {
        kept: args.keep.clone(),
        eps: args.eps,
        tol: args.tol,
        seed: args.sim.seed,
        scheme: scheme_name(args.sim.scheme).to_string(),
        t_end: args.sim.t_end,
        h: args.sim.h,
        dt: args.sim.dt,
        tamper_scale: args.tamper_scale,
        faces,
        segments_total,
        evaluated_samples: evaluated,
        max_fiber_residual: max_fiber,
        pass,
    });
    Ok(CommandOutcome {
        document: ReportDocument::new(command, input, payload),
        exit_code: if pass { 0 } else { 1 },
        summary,
    })
}
