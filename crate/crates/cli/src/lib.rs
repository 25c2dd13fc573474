//! Command-line surface: file format, report documents, and the command
//! implementations behind the `crn` binary.

pub mod commands;
pub mod format;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] format::ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Model(#[from] crn_core::model::ModelError),
    #[error("{0}")]
    Reduce(#[from] crn_core::reduce::ReduceError),
    #[error("{0}")]
    Structure(#[from] crn_core::structure::StructureError),
    #[error("{0}")]
    Dynamics(#[from] crn_core::dynamics::DynamicsError),
    #[error("{0}")]
    Diagnostics(#[from] crn_core::diagnostics::DiagnosticsError),
    #[error("{0}")]
    Cube(#[from] crn_core::cube::CubeError),
}

impl CliError {
    /// 2 = parse/usage error, 3 = numerical indeterminacy.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Structure(crn_core::structure::StructureError::Indeterminate {
                ..
            }) => 3,
            CliError::Dynamics(crn_core::dynamics::DynamicsError::LinFeas(_)) => 3,
            CliError::Diagnostics(crn_core::diagnostics::DiagnosticsError::Dynamics(
                crn_core::dynamics::DynamicsError::LinFeas(_),
            )) => 3,
            _ => 2,
        }
    }
}
