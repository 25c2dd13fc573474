//! JSON report documents.
//!
//! Every command emits one schema-versioned document with the tool
//! version, a digest of the input file, the command line that produced it,
//! a timestamp, and a command-specific payload. Serialization goes through
//! fixed struct field order, so two runs of the same command on the same
//! input produce identical bytes except for the `timestamp_unix` field.

use crn_core::diagnostics::FactorizationReport;
use crn_core::dynamics::TrajectoryStatus;
use crn_core::interval::PositiveInterval;
use crn_core::structure::ClassificationReport;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::time::{SystemTime, UNIX_EPOCH};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub input_digest: String,
    pub timestamp_unix: u64,
    pub payload: Payload,
}

impl ReportDocument {
    pub fn new(command: String, input: &str, payload: Payload) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: "crn",
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            input_digest: digest(input),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

pub fn digest(input: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(input.as_bytes());
    let bytes = hasher.finalize();
    let mut out = String::with_capacity(7 + bytes.len() * 2);
    out.push_str("sha256:");
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Classification(ClassificationPayload),
    Reduction(ReductionPayload),
    Simulation(SimulationPayload),
    Vertexical(VertexicalPayload),
}

#[derive(Debug, Serialize)]
pub struct ClassificationPayload {
    pub classification: ClassificationReport,
    pub linkage_class_count: usize,
    /// Present under `--verify-projective`: every single-species-removal
    /// reduction re-checked against the source network's classes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projectivity: Option<Vec<ProjectivityCheck>>,
}

#[derive(Debug, Serialize)]
pub struct ProjectivityCheck {
    pub removed_species: String,
    pub classification: ClassificationReport,
    /// Every class the source network belongs to survived the reduction.
    pub preserved: bool,
}

#[derive(Debug, Serialize)]
pub struct SourceInterval {
    pub reaction: String,
    pub interval: PositiveInterval,
}

#[derive(Debug, Serialize)]
pub struct MergeEntry {
    pub reduced_reaction: String,
    /// The emitted rate interval: the union hull of the per-source
    /// transformed intervals below.
    pub hull: PositiveInterval,
    /// Per-source transformed intervals, preserved so the multiset reading
    /// of merged reactions stays available alongside the hull.
    pub sources: Vec<SourceInterval>,
}

#[derive(Debug, Serialize)]
pub struct ReductionPayload {
    pub kept: Vec<String>,
    pub network_file: String,
    pub merges: Vec<MergeEntry>,
}

#[derive(Debug, Serialize)]
pub struct SimulationPayload {
    pub t_end: f64,
    pub h: f64,
    pub dt: f64,
    pub scheme: String,
    pub seed: u64,
    pub status: TrajectoryStatus,
    pub n_samples: usize,
    pub final_time: f64,
    pub final_state: Vec<f64>,
    pub max_conservation_residual: f64,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VertexicalPayload {
    pub kept: Vec<String>,
    pub eps: f64,
    pub tol: f64,
    pub seed: u64,
    pub scheme: String,
    pub t_end: f64,
    pub h: f64,
    pub dt: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tamper_scale: Option<f64>,
    pub faces: Vec<FactorizationReport>,
    pub segments_total: usize,
    pub evaluated_samples: usize,
    pub max_fiber_residual: f64,
    pub pass: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        let d = digest("species A\n");
        assert!(d.starts_with("sha256:"));
        assert_eq!(d.len(), 7 + 64);
        assert_eq!(d, digest("species A\n"));
        assert_ne!(d, digest("species B\n"));
    }

    #[test]
    fn documents_differ_only_in_timestamp() {
        let make = || {
            ReportDocument::new(
                "check x".into(),
                "input",
                Payload::Reduction(ReductionPayload {
                    kept: vec!["A".into()],
                    network_file: "species A\n".into(),
                    merges: vec![],
                }),
            )
        };
        let strip = |s: String| -> String {
            s.lines().filter(|l| !l.contains("timestamp_unix")).collect::<Vec<_>>().join("\n")
        };
        assert_eq!(strip(make().to_json()), strip(make().to_json()));
    }
}
