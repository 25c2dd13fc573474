use clap::{Parser, Subcommand};
use crn_cli::commands::{
    cmd_check, cmd_reduce, cmd_simulate, cmd_verify_vertexical, parse_scheme, CheckArgs,
    SimArgs, VertexicalArgs,
};
use crn_cli::{format, CliError};
use std::path::PathBuf;
use std::process::ExitCode;

/// Reaction network toolkit: classification, reduction, simulation, and
/// projection diagnostics over interval-rated networks.
#[derive(Parser)]
#[command(name = "crn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also write the JSON report to this path (it always goes to stdout).
    #[arg(long, global = true)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a network: graph flags and the endotactic hierarchy.
    Check {
        path: PathBuf,
        /// Re-check all classes on every single-species-removal reduction.
        #[arg(long)]
        verify_projective: bool,
        /// Cap on the exact subset enumerations.
        #[arg(long, default_value_t = 12)]
        limit: usize,
    },
    /// Project the system onto a subset of species and emit the reduced
    /// network file.
    Reduce {
        path: PathBuf,
        /// Species to keep, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<String>,
        /// Write the reduced network file here (also embedded in the report).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the mass-action inclusion under a sampled rate path and
    /// export the trajectory.
    Simulate {
        path: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        /// RK4 step size.
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// Rate path piece length.
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
        /// midpoint | uniform-random | extremal-cycling
        #[arg(long, default_value = "midpoint")]
        scheme: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the trajectory CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate, then check that in-block trajectory segments project onto
    /// trajectories of the reduced system (fiber membership of projected
    /// tangents).
    VerifyVertexical {
        path: PathBuf,
        /// Species to keep, comma separated (proper nonempty subset).
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<String>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
        #[arg(long, default_value = "midpoint")]
        scheme: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Negative-control aid: scale the projected rate intervals about
        /// their midpoints (values below 1 shrink them).
        #[arg(long)]
        tamper_scale: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let (path, command_line) = match &cli.command {
        Command::Check { path, verify_projective, limit } => (
            path.clone(),
            format!(
                "check {}{}{}",
                path.display(),
                if *verify_projective { " --verify-projective" } else { "" },
                if *limit != 12 { format!(" --limit {limit}") } else { String::new() }
            ),
        ),
        Command::Reduce { path, keep, .. } => {
            (path.clone(), format!("reduce {} --keep {}", path.display(), keep.join(",")))
        }
        Command::Simulate { path, t_end, h, dt, scheme, seed, .. } => (
            path.clone(),
            format!(
                "simulate {} --t-end {t_end} --h {h} --dt {dt} --scheme {scheme} --seed {seed}",
                path.display()
            ),
        ),
        Command::VerifyVertexical { path, keep, eps, tol, t_end, h, dt, scheme, seed, .. } => (
            path.clone(),
            format!(
                "verify-vertexical {} --keep {} --eps {eps} --tol {tol} --t-end {t_end} --h {h} --dt {dt} --scheme {scheme} --seed {seed}",
                path.display(),
                keep.join(",")
            ),
        ),
    };

    let input = std::fs::read_to_string(&path)?;
    let doc = format::parse(&input)?;

    let outcome = match &cli.command {
        Command::Check { verify_projective, limit, .. } => cmd_check(
            &input,
            &doc,
            &CheckArgs { verify_projective: *verify_projective, limit: *limit },
            command_line,
        )?,
        Command::Reduce { keep, out, .. } => {
            let outcome = cmd_reduce(&input, &doc, keep, command_line)?;
            if let Some(out_path) = out {
                if let crn_cli::report::Payload::Reduction(p) = &outcome.document.payload {
                    std::fs::write(out_path, &p.network_file)?;
                }
            }
            outcome
        }
        Command::Simulate { t_end, h, dt, scheme, seed, out, .. } => {
            let args = SimArgs {
                t_end: *t_end,
                h: *h,
                dt: *dt,
                scheme: parse_scheme(scheme)?,
                seed: *seed,
            };
            let sim = cmd_simulate(
                &input,
                &doc,
                &args,
                out.as_ref().map(|p| p.display().to_string()),
                command_line,
            )?;
            if let Some(out_path) = out {
                std::fs::write(out_path, &sim.csv)?;
            }
            sim.outcome
        }
        Command::VerifyVertexical {
            keep, eps, tol, t_end, h, dt, scheme, seed, tamper_scale, ..
        } => {
            let args = VertexicalArgs {
                keep: keep.clone(),
                eps: *eps,
                tol: *tol,
                sim: SimArgs {
                    t_end: *t_end,
                    h: *h,
                    dt: *dt,
                    scheme: parse_scheme(scheme)?,
                    seed: *seed,
                },
                tamper_scale: *tamper_scale,
            };
            cmd_verify_vertexical(&input, &doc, &args, command_line)?
        }
    };

    for line in &outcome.summary {
        eprintln!("{line}");
    }
    let json = outcome.document.to_json();
    println!("{json}");
    if let Some(report_path) = &cli.report {
        std::fs::write(report_path, format!("{json}\n"))?;
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
