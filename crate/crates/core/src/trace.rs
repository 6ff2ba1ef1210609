use serde::{Deserialize, Serialize};

use crate::config::Feature;
use crate::generation::CandidateSet;
use crate::ranking::RankingTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepReason {
    Replaced,
    RejectedByCondition,
    NoCandidates,
}

/// Inputs of the replacement test: the top candidate is accepted when it
/// is more frequent or has a lower context loss than the original word.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceCheck {
    pub zipf_top: f64,
    pub zipf_original: f64,
    pub loss_top: f64,
    pub loss_original: f64,
}

impl AcceptanceCheck {
    pub fn passes(&self) -> bool {
        self.zipf_top > self.zipf_original || self.loss_top < self.loss_original
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub position: usize,
    pub original: String,
    pub candidates: CandidateSet,
    pub ranking: Option<RankingTable>,
    pub chosen: Option<String>,
    pub accepted: bool,
    pub reason: StepReason,
    /// The Zipf filter removed every candidate and was bypassed.
    pub filter_fallback: bool,
    pub check: Option<AcceptanceCheck>,
}

/// Every replacement decision for one sentence, in order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SimplificationTrace {
    pub enabled_features: Vec<Feature>,
    pub steps: Vec<TraceStep>,
}

impl SimplificationTrace {
    pub fn accepted(&self) -> impl Iterator<Item = &TraceStep> {
        self.steps.iter().filter(|s| s.accepted)
    }

    /// Positions of rejected or candidate-less steps. They go onto the
    /// ignore list so the loop terminates.
    pub fn ignored_after_rejection(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter(|s| !s.accepted)
            .map(|s| s.position)
            .collect()
    }
}
