use std::fmt;

use ora::netdata::NetDataError;
use ora::OraError;

/// Failure of a subcommand, classified for the exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Parse(String),
    /// Numerical failure with a short class name (`breakdown`, `degeneracy`, …).
    Numerical(&'static str, String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(..) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => write!(f, "io: {m}"),
            CliError::Parse(m) => write!(f, "parse: {m}"),
            CliError::Numerical(class, m) => write!(f, "{class}: {m}"),
        }
    }
}

impl From<NetDataError> for CliError {
    fn from(e: NetDataError) -> Self {
        match e {
            NetDataError::Io { .. } => CliError::Io(e.to_string()),
            NetDataError::Invalid(m) => CliError::Usage(m),
            other => CliError::Parse(other.to_string()),
        }
    }
}

fn class_of(e: &OraError) -> &'static str {
    match e {
        OraError::BasisBreakdown { .. } => "breakdown",
        OraError::DegenerateRecurrence { .. } | OraError::DegreeDeficient { .. } => "degeneracy",
        OraError::PoleOnGrid { .. } | OraError::EvaluationAtPole(_) => "pole on axis",
        OraError::Defective(_) => "defective",
        _ => "numerical",
    }
}

impl From<OraError> for CliError {
    fn from(e: OraError) -> Self {
        match &e {
            OraError::InvalidArgument(m) => CliError::Usage(m.clone()),
            OraError::AllIterationsFailed { log } => {
                let first = log.first().map_or("no iterations ran".to_string(), |(_, m)| m.clone());
                CliError::Numerical("numerical", format!("all iterations failed; first failure: {first}"))
            }
            _ => CliError::Numerical(class_of(&e), e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
