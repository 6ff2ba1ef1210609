//! Frequency filtering and rank-averaged substitute ranking.
//!
//! Every enabled feature turns its raw scores into ranks (1 = best, tied
//! scores share the mean of their positions). The paraphrase feature is
//! already a rank. A candidate's final score is the mean of its ranks and
//! the lowest mean wins.

use std::collections::BTreeMap;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::config::{Feature, PipelineConfig};
use crate::error::{Error, Result};
use crate::generation::CandidateSet;
use crate::mlm::{LossRequest, MlmBackend};
use crate::resources::{EmbeddingStore, FrequencyStore, ParaphraseStore, Resources};
use crate::text::TokenizedSentence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LowerIsBetter,
    HigherIsBetter,
    /// Values are ranks already; they are used as given (floored at 1).
    AsRank,
}

impl Feature {
    pub fn direction(self) -> Direction {
        match self {
            Feature::BertOrder | Feature::LmLoss => Direction::LowerIsBetter,
            Feature::Similarity | Feature::Frequency => Direction::HigherIsBetter,
            Feature::Ppdb => Direction::AsRank,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScores {
    pub raw: Vec<f64>,
    pub ranks: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingTable {
    pub candidates: Vec<String>,
    pub features: BTreeMap<Feature, FeatureScores>,
    pub average_rank: Vec<f64>,
    pub best: usize,
}

impl RankingTable {
    pub fn best_candidate(&self) -> &str {
        &self.candidates[self.best]
    }

    pub fn raw(&self, feature: Feature) -> Option<&[f64]> {
        self.features.get(&feature).map(|f| f.raw.as_slice())
    }
}

/// Everything [`aggregate`] needs: candidate surfaces, their prediction
/// ranks (used for tie-breaking) and raw scores per enabled feature.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingInputs {
    pub candidates: Vec<String>,
    pub prediction_ranks: Vec<f64>,
    pub features: Vec<(Feature, Vec<f64>)>,
}

/// Ranks with ties sharing the mean of the positions they span.
pub fn mean_ranks(raw: &[f64], direction: Direction) -> Vec<f64> {
    if direction == Direction::AsRank {
        return raw.iter().map(|&r| r.max(1.0)).collect();
    }
    let key = |v: f64| match direction {
        Direction::HigherIsBetter => -v,
        _ => v,
    };
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| key(raw[a]).total_cmp(&key(raw[b])));

    let mut ranks = vec![0.0; raw.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && key(raw[order[end]]) == key(raw[order[start]]) {
            end += 1;
        }
        // positions start+1 ..= end share their mean
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

pub fn aggregate(inputs: &RankingInputs) -> Result<RankingTable> {
    let n = inputs.candidates.len();
    if n == 0 {
        return Err(Error::NoCandidates);
    }
    if inputs.prediction_ranks.len() != n {
        return Err(Error::FeatureLength {
            feature: "prediction_rank",
            got: inputs.prediction_ranks.len(),
            expected: n,
        });
    }
    if inputs.features.is_empty() {
        return Err(Error::InvalidConfig("no ranking features enabled".into()));
    }

    let mut features = BTreeMap::new();
    for (feature, raw) in &inputs.features {
        if raw.len() != n {
            return Err(Error::FeatureLength {
                feature: feature.name(),
                got: raw.len(),
                expected: n,
            });
        }
        let ranks = mean_ranks(raw, feature.direction());
        features.insert(
            *feature,
            FeatureScores {
                raw: raw.clone(),
                ranks,
            },
        );
    }

    let count = features.len() as f64;
    let average_rank: Vec<f64> = (0..n)
        .map(|i| features.values().map(|f| f.ranks[i]).sum::<f64>() / count)
        .collect();

    let best = (0..n)
        .min_by(|&a, &b| {
            average_rank[a]
                .total_cmp(&average_rank[b])
                .then(inputs.prediction_ranks[a].total_cmp(&inputs.prediction_ranks[b]))
                .then_with(|| inputs.candidates[a].cmp(&inputs.candidates[b]))
        })
        .expect("n > 0");

    Ok(RankingTable {
        candidates: inputs.candidates.clone(),
        features,
        average_rank,
        best,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome {
    pub candidates: CandidateSet,
    /// Every candidate fell below the threshold and the input was kept.
    pub fallback: bool,
}

/// Drops candidates whose Zipf value is below `min_zipf`, renumbering
/// prediction ranks. If nothing would survive, the input is returned and
/// `fallback` is set.
pub fn filter_by_frequency(
    candidates: &CandidateSet,
    store: &FrequencyStore,
    min_zipf: f64,
) -> FilterOutcome {
    let kept = candidates.retain(|c| store.zipf(&c.surface) >= min_zipf);
    if kept.is_empty() && !candidates.is_empty() {
        debug!(
            "all {} candidates for {:?} are below Zipf {min_zipf}; ranking them unfiltered",
            candidates.len(),
            candidates.complex_word
        );
        return FilterOutcome {
            candidates: candidates.clone(),
            fallback: true,
        };
    }
    FilterOutcome {
        candidates: kept,
        fallback: false,
    }
}

pub fn feature_bert_order(candidates: &CandidateSet) -> Vec<f64> {
    candidates
        .candidates
        .iter()
        .map(|c| c.prediction_rank as f64)
        .collect()
}

/// Token range `[start, end)` of the symmetric window around `position`.
pub fn lm_window(len: usize, position: usize, window: usize) -> (usize, usize) {
    (
        position.saturating_sub(window),
        (position + window + 1).min(len),
    )
}

fn window_requests(
    sentence: &TokenizedSentence,
    position: usize,
    substitute: &str,
    window: usize,
) -> Result<Vec<LossRequest>> {
    sentence.token(position)?;
    if window == 0 {
        return Err(Error::InvalidConfig("lm_window must be at least 1".into()));
    }
    let (start, end) = lm_window(sentence.len(), position, window);
    let mut tokens: Vec<String> = sentence.tokens()[start..end]
        .iter()
        .map(|t| t.surface.clone())
        .collect();
    tokens[position - start] = substitute.to_string();
    Ok((0..tokens.len())
        .map(|j| LossRequest {
            target: tokens[j].clone(),
            tokens: tokens.clone(),
            position: j,
        })
        .collect())
}

/// Mean masked-LM loss over the context window with `candidate` placed at
/// `position`. With the original word as candidate this is the loss of the
/// unmodified context.
pub fn feature_lm_loss(
    sentence: &TokenizedSentence,
    position: usize,
    candidate: &str,
    backend: &dyn MlmBackend,
    window: usize,
) -> Result<f64> {
    let requests = window_requests(sentence, position, candidate, window)?;
    let losses = backend.token_losses(&requests)?;
    Ok(losses.iter().map(|l| l.nats).sum::<f64>() / losses.len() as f64)
}

pub fn feature_similarity(complex_word: &str, candidate: &str, embeddings: &EmbeddingStore) -> f64 {
    embeddings.cosine(complex_word, candidate).value
}

pub fn feature_frequency(candidate: &str, store: &FrequencyStore) -> f64 {
    store.zipf(candidate)
}

/// 1 when the pair is a known paraphrase, otherwise `n / 3`.
pub fn feature_ppdb(complex_word: &str, candidate: &str, store: &ParaphraseStore, n: usize) -> f64 {
    if store.contains_pair(complex_word, candidate) {
        1.0
    } else {
        n as f64 / 3.0
    }
}

/// Computes every enabled feature for an already filtered candidate set and
/// aggregates them.
pub fn rank_candidates(
    sentence: &TokenizedSentence,
    candidates: &CandidateSet,
    config: &PipelineConfig,
    resources: &Resources,
    backend: &dyn MlmBackend,
) -> Result<RankingTable> {
    let n = candidates.len();
    if n == 0 {
        return Err(Error::NoCandidates);
    }
    let word = candidates.complex_word.as_str();
    let surfaces: Vec<String> = candidates.surfaces().into_iter().map(String::from).collect();

    let mut features = Vec::new();
    for feature in config.enabled_features() {
        let raw = match feature {
            Feature::BertOrder => feature_bert_order(candidates),
            Feature::LmLoss => surfaces
                .iter()
                .map(|c| feature_lm_loss(sentence, candidates.position, c, backend, config.lm_window))
                .collect::<Result<_>>()?,
            Feature::Similarity => surfaces
                .iter()
                .map(|c| feature_similarity(word, c, &resources.embeddings))
                .collect(),
            Feature::Frequency => surfaces
                .iter()
                .map(|c| feature_frequency(c, &resources.frequency))
                .collect(),
            Feature::Ppdb => surfaces
                .iter()
                .map(|c| feature_ppdb(word, c, &resources.paraphrases, n))
                .collect(),
        };
        features.push((feature, raw));
    }

    aggregate(&RankingInputs {
        candidates: surfaces,
        prediction_ranks: feature_bert_order(candidates),
        features,
    })
}
