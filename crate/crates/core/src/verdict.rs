//! Three-valued certificates for semidecidable limit statements.
//!
//! `Proven` and `Refuted` carry machine-checkable certificates about finite
//! data; `Evidence` records how far a property was observed to hold without
//! claiming the limit statement itself.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict<C, E, W> {
    Proven { certificate: C },
    Evidence { horizon: u64, envelope: E },
    Refuted { witness: W },
}

impl<C, E, W> Verdict<C, E, W> {
    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven { .. })
    }

    pub fn is_evidence(&self) -> bool {
        matches!(self, Verdict::Evidence { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Proven { .. } => "proven",
            Verdict::Evidence { .. } => "evidence_up_to_horizon",
            Verdict::Refuted { .. } => "refuted",
        }
    }
}
