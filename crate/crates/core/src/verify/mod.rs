//! Checkers that evaluate structural statements about excluded minors on
//! concrete instances, and suites that sweep catalogs of instances.
//!
//! Every checker first certifies the statement's hypotheses in order and
//! reports the first one that fails; only then is the conclusion evaluated.
//! A `Fail` outcome on certified hypotheses is a bug in the kernel.

mod context;
mod instance;
mod suite;

use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;

pub use context::{strong_stabilizer_known, triad_free_equivalent, ContextChecker};
pub use instance::{
    delta_wye_connectivity, excluded_minor_no_four_fans, exchange_preserves_excluded, fragile_connectivity, guts_coguts,
    two_separation_minor_side, vertical_separation_cleanup,
};
pub use suite::{catalog, random_instances, run_suite, SuiteConfig, SuiteReport, SUITES};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Pass,
    Fail {
        witness: Value,
    },
    HypothesesUnmet {
        clause: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        detail: Option<String>,
    },
    Undecided {
        reason: String,
    },
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail { .. })
    }

    /// The unmet clause, if any.
    pub fn clause(&self) -> Option<&str> {
        match self {
            Outcome::HypothesesUnmet { clause, .. } => Some(clause),
            _ => None,
        }
    }

    pub(crate) fn unmet(clause: &str) -> Self {
        Outcome::HypothesesUnmet { clause: clause.into(), detail: None }
    }

    pub(crate) fn fail(witness: Value) -> Self {
        Outcome::Fail { witness }
    }
}

/// Which hypotheses a run is allowed to skip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Every hypothesis is certified as stated.
    #[default]
    Normative,
    /// Size bounds `|E(M)| ≥ |E(N)| + k` are skipped.
    SizeRelaxed,
    /// Size bounds, excluded-minor certification and the stabilizer
    /// hypothesis are skipped; only the structural hypotheses remain.
    StructureRelaxed,
}

impl Mode {
    pub fn is_normative(&self) -> bool {
        *self == Mode::Normative
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub statement: String,
    pub instance: String,
    #[serde(flatten)]
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Mode::is_normative")]
    pub mode: Mode,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerifyReport {
    /// Runs `check` and times it.
    pub fn run(statement: &str, instance: impl Into<String>, mode: Mode, check: impl FnOnce() -> Outcome) -> Self {
        let start = std::time::Instant::now();
        let outcome = check();
        VerifyReport { statement: statement.into(), instance: instance.into(), outcome, mode, elapsed: start.elapsed() }
    }

    /// A failure that counts against the statement: only normative runs do.
    pub fn is_counted_fail(&self) -> bool {
        self.outcome.is_fail() && self.mode.is_normative()
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Early exit carrying a finished outcome.
pub(crate) type Step<T> = std::result::Result<T, Outcome>;

pub(crate) fn need(cond: bool, clause: &str) -> Step<()> {
    if cond {
        Ok(())
    } else {
        Err(Outcome::unmet(clause))
    }
}

/// Search limits become `Undecided`; anything else means the input does not
/// meet the statement's shape.
pub(crate) fn exact<T>(r: crate::Result<T>) -> Step<T> {
    r.map_err(|e| match e {
        Error::Budget(_) | Error::SizeLimit { .. } => Outcome::Undecided { reason: e.to_string() },
        other => Outcome::HypothesesUnmet { clause: "well_formed".into(), detail: Some(other.to_string()) },
    })
}

pub(crate) fn settle(s: Step<Outcome>) -> Outcome {
    s.unwrap_or_else(|o| o)
}
