//! Recursive sentence simplification.
//!
//! Entities are detected once. Then, until no word scores above the
//! threshold: the most complex remaining word is simplified, the sentence
//! is updated if the replacement passes the acceptance test, the position
//! joins the ignore list, and complexity is recomputed on the new text.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::config::{Feature, PipelineConfig};
use crate::cwi::{
    detect_entities, score_complexity, select_complex_words, CapitalizationRecognizer,
    ComplexityScorer, EntityRecognizer, FrequencyScorer,
};
use crate::error::Result;
use crate::generation::generate_candidates;
use crate::mlm::MlmBackend;
use crate::ranking::{feature_lm_loss, filter_by_frequency, rank_candidates};
use crate::resources::Resources;
use crate::text::{match_case, TokenizedSentence};
use crate::trace::{AcceptanceCheck, SimplificationTrace, StepReason, TraceStep};

#[derive(Debug, Clone, PartialEq)]
pub struct SimplifiedResult {
    pub original: TokenizedSentence,
    pub simplified: TokenizedSentence,
    pub trace: SimplificationTrace,
    pub iterations: usize,
    /// Positions protected as named entities.
    pub entities: BTreeSet<usize>,
}

/// The per-sentence JSON record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub original: String,
    pub simplified: String,
    pub iterations: usize,
    pub entities: Vec<usize>,
    pub trace: SimplificationTrace,
}

impl SimplifiedResult {
    pub fn record(&self) -> SentenceRecord {
        SentenceRecord {
            original: self.original.text().to_string(),
            simplified: self.simplified.text().to_string(),
            iterations: self.iterations,
            entities: self.entities.iter().copied().collect(),
            trace: self.trace.clone(),
        }
    }

    pub fn replacements(&self) -> usize {
        self.trace.accepted().count()
    }
}

/// Bundles configuration, resources and the model. Complexity scoring and
/// entity recognition default to the frequency scorer and the
/// capitalization heuristic backed by the frequency list.
pub struct Simplifier<'a> {
    config: PipelineConfig,
    resources: &'a Resources,
    backend: &'a dyn MlmBackend,
    scorer: Option<&'a dyn ComplexityScorer>,
    recognizer: Option<&'a dyn EntityRecognizer>,
}

impl<'a> Simplifier<'a> {
    pub fn new(
        config: PipelineConfig,
        resources: &'a Resources,
        backend: &'a dyn MlmBackend,
    ) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            resources,
            backend,
            scorer: None,
            recognizer: None,
        })
    }

    pub fn with_scorer(mut self, scorer: &'a dyn ComplexityScorer) -> Self {
        self.scorer = Some(scorer);
        self
    }

    pub fn with_recognizer(mut self, recognizer: &'a dyn EntityRecognizer) -> Self {
        self.recognizer = Some(recognizer);
        self
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    /// Generates, filters and ranks substitutes for one word, then applies
    /// the acceptance test. Returns the replacement (case-matched to the
    /// original) when accepted.
    pub fn simplify_word(
        &self,
        sentence: &TokenizedSentence,
        position: usize,
    ) -> Result<(Option<String>, TraceStep)> {
        let config = &self.config;
        let original = sentence.token(position)?.surface.clone();
        let generated = generate_candidates(sentence, position, config, self.backend)?;
        if generated.is_empty() {
            return Ok((
                None,
                TraceStep {
                    position,
                    original,
                    candidates: generated,
                    ranking: None,
                    chosen: None,
                    accepted: false,
                    reason: StepReason::NoCandidates,
                    filter_fallback: false,
                    check: None,
                },
            ));
        }

        let filtered = filter_by_frequency(&generated, &self.resources.frequency, config.zipf_filter_min);
        let candidates = filtered.candidates;
        let table = rank_candidates(sentence, &candidates, config, self.resources, self.backend)?;
        let top = table.best_candidate().to_string();

        let loss_top = match table.raw(Feature::LmLoss) {
            Some(raw) => raw[table.best],
            None => feature_lm_loss(sentence, position, &top, self.backend, config.lm_window)?,
        };
        let loss_original =
            feature_lm_loss(sentence, position, &original, self.backend, config.lm_window)?;
        let check = AcceptanceCheck {
            zipf_top: self.resources.frequency.zipf(&top),
            zipf_original: self.resources.frequency.zipf(&original),
            loss_top,
            loss_original,
        };

        let accepted = !config.acceptance_condition || check.passes();
        let chosen = accepted.then(|| match_case(&original, &top));
        let step = TraceStep {
            position,
            original,
            candidates,
            ranking: Some(table),
            chosen: chosen.clone(),
            accepted,
            reason: if accepted {
                StepReason::Replaced
            } else {
                StepReason::RejectedByCondition
            },
            filter_fallback: filtered.fallback,
            check: Some(check),
        };
        Ok((chosen, step))
    }

    pub fn simplify_sentence(&self, text: &str) -> Result<SimplifiedResult> {
        let original = TokenizedSentence::tokenize(text);
        self.simplify_tokens(original)
    }

    /// Runs the loop over an already tokenized sentence.
    pub fn simplify_tokens(&self, original: TokenizedSentence) -> Result<SimplifiedResult> {
        let default_scorer = FrequencyScorer::new(&self.resources.frequency);
        let scorer: &dyn ComplexityScorer = self.scorer.unwrap_or(&default_scorer);
        let default_recognizer =
            CapitalizationRecognizer::new().with_lexicon(&self.resources.frequency);
        let recognizer: &dyn EntityRecognizer = self.recognizer.unwrap_or(&default_recognizer);

        let entities = detect_entities(&original, recognizer);
        let mut ignore = entities.clone();
        let mut sentence = original.clone();
        let mut trace = SimplificationTrace {
            enabled_features: self.config.enabled_features(),
            steps: Vec::new(),
        };
        let mut iterations = 0;

        loop {
            let annotation = score_complexity(&sentence, scorer).with_ignored(ignore.iter().copied());
            let Some(&position) = select_complex_words(&annotation, self.config.complexity_threshold).first()
            else {
                break;
            };
            iterations += 1;
            let (chosen, step) = self
                .simplify_word(&sentence, position)
                .map_err(|e| e.at(position))?;
            if let Some(replacement) = chosen {
                sentence = sentence.replace_token(position, &replacement)?;
            }
            // rejected words are ignored too, otherwise the loop would retry them forever
            ignore.insert(position);
            trace.steps.push(step);
        }

        Ok(SimplifiedResult {
            original,
            simplified: sentence,
            trace,
            iterations,
            entities,
        })
    }

    /// Order-preserving; a failing line does not stop the batch.
    pub fn simplify_batch<S: AsRef<str>>(&self, lines: &[S]) -> Vec<Result<SimplifiedResult>> {
        lines
            .iter()
            .map(|line| self.simplify_sentence(line.as_ref()))
            .collect()
    }
}

pub fn simplify_word(
    sentence: &TokenizedSentence,
    position: usize,
    config: &PipelineConfig,
    resources: &Resources,
    backend: &dyn MlmBackend,
) -> Result<(Option<String>, TraceStep)> {
    Simplifier::new(config.clone(), resources, backend)?.simplify_word(sentence, position)
}

pub fn simplify_sentence(
    text: &str,
    config: &PipelineConfig,
    resources: &Resources,
    backend: &dyn MlmBackend,
) -> Result<SimplifiedResult> {
    Simplifier::new(config.clone(), resources, backend)?.simplify_sentence(text)
}

pub fn simplify_batch<S: AsRef<str>>(
    lines: &[S],
    config: &PipelineConfig,
    resources: &Resources,
    backend: &dyn MlmBackend,
) -> Result<Vec<Result<SimplifiedResult>>> {
    Ok(Simplifier::new(config.clone(), resources, backend)?.simplify_batch(lines))
}
