//! Verification reports for the individual claims, each carrying the
//! witnesses needed to re-check it.

mod claims;
mod diagram;
mod recheck;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::decompose::DEFAULT_SEED;
use crate::error::Error;

pub use claims::{
    verify_example_w, verify_gl_vanishing, verify_gr_instance, verify_rem_mn, verify_splitpres,
    verify_staysl2_bound, verify_thm_w,
};
pub use diagram::{diagram_split_with_witness, verify_diagram_split, DiagramWitness};
pub use recheck::recheck_report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    OutOfBudget,
}

impl Status {
    /// Combines sub-check statuses: any failure fails, then budget, then
    /// inconclusive.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (OutOfBudget, _) | (_, OutOfBudget) => OutOfBudget,
            _ => Pass,
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Status for an error raised while checking.
    pub fn from_error(e: &Error) -> Status {
        match e {
            Error::Resource { .. } => Status::OutOfBudget,
            Error::SplittingNotFound(_) | Error::Inconclusive(_) => Status::Inconclusive,
            _ => Status::Fail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub params: Map<String, Value>,
    pub status: Status,
    pub witnesses: Value,
    /// Wall-clock time, filled in only on request so reports stay reproducible.
    pub timing_ms: Option<u64>,
}

impl VerificationReport {
    pub(crate) fn new(claim: &str, params: Value, status: Status, witnesses: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        VerificationReport { claim: claim.into(), params, status, witnesses, timing_ms: None }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Options shared by all checks.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Embed full matrices in the witnesses.
    pub witness: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: DEFAULT_SEED, witness: true }
    }
}
