use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::GoldInstance;

/// Precision, recall and F1 of a generated candidate list.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SgScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn lowered<S: AsRef<str>>(words: &[S]) -> HashSet<String> {
    words.iter().map(|w| w.as_ref().to_lowercase()).collect()
}

/// Case-insensitive exact-match scores. Duplicates count once.
pub fn eval_sg<S: AsRef<str>, T: AsRef<str>>(generated: &[S], gold: &[T]) -> SgScores {
    let generated = lowered(generated);
    let gold = lowered(gold);
    let hits = generated.intersection(&gold).count() as f64;
    let precision = if generated.is_empty() {
        0.0
    } else {
        hits / generated.len() as f64
    };
    let recall = if gold.is_empty() {
        0.0
    } else {
        hits / gold.len() as f64
    };
    SgScores {
        precision,
        recall,
        f1: harmonic(precision, recall),
    }
}

/// Corpus-level generation scores.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SgReport {
    pub instances: usize,
    /// Mean per-instance precision.
    pub precision: f64,
    /// Mean per-instance recall.
    pub recall: f64,
    /// Harmonic mean of the corpus precision and recall.
    pub f1: f64,
    /// Mean of per-instance F1 values.
    pub mean_instance_f1: f64,
}

impl SgReport {
    pub fn from_instances(scores: &[SgScores]) -> Self {
        let n = scores.len();
        if n == 0 {
            return Self::default();
        }
        let mean = |f: fn(&SgScores) -> f64| scores.iter().map(f).sum::<f64>() / n as f64;
        let precision = mean(|s| s.precision);
        let recall = mean(|s| s.recall);
        Self {
            instances: n,
            precision,
            recall,
            f1: harmonic(precision, recall),
            mean_instance_f1: mean(|s| s.f1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PipelineHit {
    /// The replacement is the original word or a gold substitution.
    pub pre_hit: bool,
    /// The replacement differs from the original and is a gold substitution.
    pub acc_hit: bool,
}

pub fn eval_pipeline<S: AsRef<str>>(replacement: &str, original: &str, gold: &[S]) -> PipelineHit {
    let replacement = replacement.to_lowercase();
    let unchanged = replacement == original.to_lowercase();
    let in_gold = lowered(gold).contains(&replacement);
    PipelineHit {
        pre_hit: unchanged || in_gold,
        acc_hit: !unchanged && in_gold,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PipelineReport {
    pub instances: usize,
    pub precision: f64,
    pub accuracy: f64,
    /// Fraction of instances where the word was changed at all.
    pub changed: f64,
}

impl PipelineReport {
    pub fn from_hits(hits: &[PipelineHit], changed: usize) -> Self {
        let n = hits.len();
        if n == 0 {
            return Self::default();
        }
        let frac = |c: usize| c as f64 / n as f64;
        Self {
            instances: n,
            precision: frac(hits.iter().filter(|h| h.pre_hit).count()),
            accuracy: frac(hits.iter().filter(|h| h.acc_hit).count()),
            changed: frac(changed),
        }
    }

    /// From `(final word, hit)` pairs aligned with their instances.
    pub fn from_outcomes(instances: &[GoldInstance], outcomes: &[(String, PipelineHit)]) -> Self {
        let changed = instances
            .iter()
            .zip(outcomes)
            .filter(|(inst, (word, _))| word.to_lowercase() != inst.target.to_lowercase())
            .count();
        let hits: Vec<PipelineHit> = outcomes.iter().map(|(_, h)| *h).collect();
        Self::from_hits(&hits, changed)
    }
}
