use fermiconc::{Error, SystemShape, Tolerances};
use serde::Serialize;
use std::fmt;
use std::process::ExitCode;

pub const TOOL: &str = "fermiconc";

/// Self-describing wrapper around every JSON result.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    /// Arguments after the program name, as given.
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub shape: SystemShape,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(
        command: &[String],
        seed: Option<u64>,
        tolerances: Tolerances,
        shape: SystemShape,
        result: T,
    ) -> Self {
        Self {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_vec(),
            seed,
            tolerances,
            shape,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Why a command did not succeed, mapped onto the exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or invalid input.
    Usage(String),
    /// A library error on valid-looking input.
    Input(Error),
    /// The shape admits only one state up to phase.
    Degenerate(String),
    /// A check failed. Without a message the report was already printed.
    Verification(Option<String>),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) | Failure::Input(_) => 2,
            Failure::Degenerate(_) => 3,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Input(e) => write!(f, "{e}"),
            Failure::Degenerate(m) => write!(f, "{m}"),
            Failure::Verification(Some(m)) => write!(f, "verification failed: {m}"),
            Failure::Verification(None) => write!(f, "verification failed"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateShape { .. } => Failure::Degenerate(e.to_string()),
            Error::BoundViolation { .. } => Failure::Verification(Some(e.to_string())),
            other => Failure::Input(other),
        }
    }
}
