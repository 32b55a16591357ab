//! The reproduction driver: ten named checks, each with pinned tolerances
//! and a time budget, runnable via `tseq reproduce <id|all>` and exercised
//! by the acceptance test suite.

mod oracle;
mod suite;

use std::time::Instant;

use serde_json::json;

use crate::config::RunConfig;
use crate::records::AppError;

pub use oracle::CanonicalOracle;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub elapsed_secs: f64,
    pub budget_secs: f64,
    pub details: Vec<String>,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:2} [{}]: {} ({:.2}s, budget {:.0}s)",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.elapsed_secs,
            self.budget_secs
        )
    }

    pub fn record(&self) -> serde_json::Value {
        json!({
            "cmd": "reproduce",
            "id": self.id,
            "name": self.name,
            "pass": self.pass,
            "elapsed_secs": self.elapsed_secs,
            "budget_secs": self.budget_secs,
            "details": self.details,
        })
    }
}

struct Check {
    id: u32,
    name: &'static str,
    budget_secs: f64,
    run: fn(&RunConfig, &mut Vec<String>) -> Result<(), String>,
}

const CHECKS: [Check; 10] = [
    Check { id: 1, name: "shifted-difference-identity-and-persistence", budget_secs: 5.0, run: suite::c01 },
    Check { id: 2, name: "canonical-form-oracle-equivalence", budget_secs: 60.0, run: suite::c02 },
    Check { id: 3, name: "support-weight-order-bounds", budget_secs: 120.0, run: suite::c03 },
    Check { id: 4, name: "block-decomposition-identity", budget_secs: 5.0, run: suite::c04 },
    Check { id: 5, name: "scaled-embedding-classification", budget_secs: 60.0, run: suite::c05 },
    Check { id: 6, name: "embedding-kernel-over-torsion", budget_secs: 1.0, run: suite::c06 },
    Check { id: 7, name: "sum-classification-and-kernel", budget_secs: 60.0, run: suite::c07 },
    Check { id: 8, name: "faithful-witness-construction", budget_secs: 5.0, run: suite::c08 },
    Check { id: 9, name: "order-criteria-chain", budget_secs: 60.0, run: suite::c09 },
    Check { id: 10, name: "window-monotonicity-and-witness-soundness", budget_secs: 30.0, run: suite::c10 },
];

pub fn ids() -> Vec<u32> {
    CHECKS.iter().map(|c| c.id).collect()
}

/// Run one criterion. A failed check reports `pass: false` with the failure
/// in the details; errors propagate only for invalid configuration.
pub fn run(id: u32, cfg: &RunConfig) -> Result<CriterionReport, AppError> {
    let check = CHECKS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| AppError::Input(format!("no criterion {id}; valid ids are 1..=10")))?;
    let mut details = Vec::new();
    let start = Instant::now();
    let outcome = (check.run)(cfg, &mut details);
    let elapsed_secs = start.elapsed().as_secs_f64();
    let pass = match outcome {
        Ok(()) => true,
        Err(msg) => {
            details.push(format!("FAILED: {msg}"));
            false
        }
    };
    Ok(CriterionReport {
        id: check.id,
        name: check.name,
        pass,
        elapsed_secs,
        budget_secs: check.budget_secs,
        details,
    })
}
