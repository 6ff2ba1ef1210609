use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the masked-LM input is assembled for a complex word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GenerationMode {
    /// Original sentence followed by a copy with the target masked.
    #[default]
    SentencePair,
    /// Single sentence, target masked.
    SingleMasked,
    /// Single sentence, target left visible; predictions read at its slot.
    SingleUnmasked,
}

impl FromStr for GenerationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sentence_pair" => Ok(Self::SentencePair),
            "single_masked" => Ok(Self::SingleMasked),
            "single_unmasked" => Ok(Self::SingleUnmasked),
            other => Err(Error::InvalidConfig(format!("unknown generation mode {other:?}"))),
        }
    }
}

/// The five ranking features.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    BertOrder,
    LmLoss,
    Similarity,
    Frequency,
    Ppdb,
}

impl Feature {
    pub const ALL: [Feature; 5] = [
        Feature::BertOrder,
        Feature::LmLoss,
        Feature::Similarity,
        Feature::Frequency,
        Feature::Ppdb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::BertOrder => "bert_order",
            Feature::LmLoss => "lm_loss",
            Feature::Similarity => "similarity",
            Feature::Frequency => "frequency",
            Feature::Ppdb => "ppdb",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Feature::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown feature {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Words scoring strictly above this are complex.
    pub complexity_threshold: f64,
    /// Number of masked-LM predictions requested per complex word.
    pub top_k: usize,
    /// Candidates below this Zipf value are filtered before ranking.
    pub zipf_filter_min: f64,
    /// Context tokens on each side of the target for the LM-loss feature.
    pub lm_window: usize,
    /// Fraction of non-target context words masked in the first segment.
    pub context_mask_prob: f64,
    pub rng_seed: u64,
    pub generation_mode: GenerationMode,
    pub disabled_features: Vec<Feature>,
    /// Replace only when the top candidate is more frequent or fits the
    /// context with lower loss than the original word.
    pub acceptance_condition: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            complexity_threshold: 0.5,
            top_k: 10,
            zipf_filter_min: 3.0,
            lm_window: 5,
            context_mask_prob: 0.0,
            rng_seed: 0,
            generation_mode: GenerationMode::SentencePair,
            disabled_features: Vec::new(),
            acceptance_condition: true,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = 0.0..=1.0;
        if !unit.contains(&self.complexity_threshold) {
            return Err(Error::InvalidConfig(format!(
                "complexity_threshold must be in [0, 1], got {}",
                self.complexity_threshold
            )));
        }
        if !unit.contains(&self.context_mask_prob) {
            return Err(Error::InvalidConfig(format!(
                "context_mask_prob must be in [0, 1], got {}",
                self.context_mask_prob
            )));
        }
        if self.top_k == 0 {
            return Err(Error::InvalidConfig("top_k must be at least 1".into()));
        }
        if self.lm_window == 0 {
            return Err(Error::InvalidConfig("lm_window must be at least 1".into()));
        }
        if !self.zipf_filter_min.is_finite() {
            return Err(Error::InvalidConfig("zipf_filter_min must be finite".into()));
        }
        if self.enabled_features().is_empty() {
            return Err(Error::InvalidConfig("at least one ranking feature must stay enabled".into()));
        }
        Ok(())
    }

    /// Enabled features in canonical order.
    pub fn enabled_features(&self) -> Vec<Feature> {
        Feature::ALL
            .into_iter()
            .filter(|f| !self.disabled_features.contains(f))
            .collect()
    }

    pub fn is_enabled(&self, feature: Feature) -> bool {
        !self.disabled_features.contains(&feature)
    }
}
