//! Substitute generation from masked-LM predictions over a sentence pair.

use std::collections::HashSet;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

use crate::config::{GenerationMode, PipelineConfig};
use crate::error::Result;
use crate::mlm::{MlmBackend, MlmQuery, MASK};
use crate::text::TokenizedSentence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    /// Lowercased surface form.
    pub surface: String,
    pub probability: f64,
    /// 1-based position in the model's prediction order.
    pub prediction_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub complex_word: String,
    pub position: usize,
    pub candidates: Vec<Candidate>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.candidates.iter().map(|c| c.surface.as_str()).collect()
    }

    /// Keeps the candidates for which `keep` holds and renumbers
    /// prediction ranks 1..m in their existing order.
    pub fn retain(&self, mut keep: impl FnMut(&Candidate) -> bool) -> CandidateSet {
        let candidates = self
            .candidates
            .iter()
            .filter(|c| keep(c))
            .enumerate()
            .map(|(i, c)| Candidate {
                prediction_rank: i + 1,
                ..c.clone()
            })
            .collect();
        CandidateSet {
            complex_word: self.complex_word.clone(),
            position: self.position,
            candidates,
        }
    }
}

fn stemmer() -> &'static Stemmer {
    static STEMMER: OnceLock<Stemmer> = OnceLock::new();
    STEMMER.get_or_init(|| Stemmer::create(Algorithm::English))
}

pub fn stem(word: &str) -> String {
    stemmer().stem(&word.to_lowercase()).into_owned()
}

/// True when both words reduce to the same stem.
pub fn is_morphological_derivation(a: &str, b: &str) -> bool {
    stem(a) == stem(b)
}

fn context_rng(seed: u64, position: usize) -> ChaCha8Rng {
    // splitmix-style mixing so neighbouring positions get unrelated streams
    let mut z = seed ^ (position as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// Assembles the masked-LM query for the word at `position`.
pub fn build_mask_input(
    sentence: &TokenizedSentence,
    position: usize,
    config: &PipelineConfig,
) -> Result<MlmQuery> {
    sentence.token(position)?;
    let words = sentence.surfaces();
    Ok(match config.generation_mode {
        GenerationMode::SingleMasked => MlmQuery::single_masked(words, position),
        GenerationMode::SingleUnmasked => MlmQuery::single_unmasked(words, position),
        GenerationMode::SentencePair => {
            let mut context = words.clone();
            if config.context_mask_prob > 0.0 {
                let mut rng = context_rng(config.rng_seed, position);
                for (i, tok) in sentence.tokens().iter().enumerate() {
                    if i == position || tok.is_punctuation() {
                        continue;
                    }
                    if rng.random::<f64>() < config.context_mask_prob {
                        context[i] = MASK.to_string();
                    }
                }
            }
            MlmQuery::pair(context, words, position)
        }
    })
}

/// Top-k predictions for the complex word, minus the word itself and its
/// morphological derivations.
pub fn generate_candidates(
    sentence: &TokenizedSentence,
    position: usize,
    config: &PipelineConfig,
    backend: &dyn MlmBackend,
) -> Result<CandidateSet> {
    config.validate()?;
    let complex_word = sentence.token(position)?.surface.clone();
    let complex_lower = complex_word.to_lowercase();
    let complex_stem = stem(&complex_lower);

    let query = build_mask_input(sentence, position, config)?;
    let prediction = backend.predict_masked(&query, config.top_k)?;

    let mut seen = HashSet::new();
    let candidates = prediction
        .entries
        .into_iter()
        .map(|(w, p)| (w.to_lowercase(), p))
        .filter(|(w, _)| *w != complex_lower && stem(w) != complex_stem && seen.insert(w.clone()))
        .take(config.top_k)
        .enumerate()
        .map(|(i, (surface, probability))| Candidate {
            surface,
            probability,
            prediction_rank: i + 1,
        })
        .collect();

    Ok(CandidateSet {
        complex_word,
        position,
        candidates,
    })
}
