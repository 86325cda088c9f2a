use serde::{Deserialize, Serialize};
use serde_json::Value;

use dioph::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod exit {
    pub const OK: u8 = 0;
    pub const NO_SOLUTIONS: u8 = 1;
    pub const PRECISION: u8 = 2;
    pub const INVALID: u8 = 3;
    pub const NO_SUCH_SOLUTION: u8 = 4;
    pub const NOT_VERIFIED: u8 = 5;
}

/// One self-describing record per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub inputs: Value,
    pub precision_bits: u32,
    pub hprime_convention: String,
    pub version: String,
    pub payload: Value,
    #[serde(skip)]
    pub summary: String,
}

pub struct Outcome {
    pub envelope: ReportEnvelope,
    pub code: u8,
}

pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted(_) => exit::PRECISION,
        Error::NoSuchSolution { .. } => exit::NO_SUCH_SOLUTION,
        _ => exit::INVALID,
    }
}
