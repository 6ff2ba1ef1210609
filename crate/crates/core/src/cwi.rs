//! Complex word identification and entity protection.

use std::collections::{BTreeSet, HashMap, HashSet};

use log::warn;

use crate::error::Result;
use crate::resources::FrequencyStore;
use crate::text::{is_capitalized, TokenizedSentence};

/// Zipf value treated as "maximally familiar" by the frequency scorer.
pub const ZIPF_CEILING: f64 = 7.0;

/// Assigns each token a likelihood of being complex.
pub trait ComplexityScorer: Send + Sync {
    /// One score per token. Values outside [0, 1] are clamped by the caller.
    fn score(&self, sentence: &TokenizedSentence) -> Vec<f64>;
}

/// `p = clamp(1 - zipf / 7, 0, 1)`; unseen words score 1.
#[derive(Debug, Clone, Copy)]
pub struct FrequencyScorer<'a> {
    store: &'a FrequencyStore,
}

impl<'a> FrequencyScorer<'a> {
    pub fn new(store: &'a FrequencyStore) -> Self {
        Self { store }
    }

    pub fn word_score(&self, word: &str) -> f64 {
        if !self.store.contains(word) {
            return 1.0;
        }
        (1.0 - self.store.zipf(word) / ZIPF_CEILING).clamp(0.0, 1.0)
    }
}

impl ComplexityScorer for FrequencyScorer<'_> {
    fn score(&self, sentence: &TokenizedSentence) -> Vec<f64> {
        sentence
            .tokens()
            .iter()
            .map(|t| self.word_score(&t.surface))
            .collect()
    }
}

/// Fixed per-word scores, e.g. precomputed by an external model.
#[derive(Debug, Clone, Default)]
pub struct LexiconScorer {
    scores: HashMap<String, f64>,
    default: f64,
}

impl LexiconScorer {
    pub fn new<I, S>(scores: I, default: f64) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        Self {
            scores: scores
                .into_iter()
                .map(|(w, p)| (w.as_ref().to_lowercase(), p))
                .collect(),
            default,
        }
    }
}

impl ComplexityScorer for LexiconScorer {
    fn score(&self, sentence: &TokenizedSentence) -> Vec<f64> {
        sentence
            .tokens()
            .iter()
            .map(|t| {
                self.scores
                    .get(&t.surface.to_lowercase())
                    .copied()
                    .unwrap_or(self.default)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexityAnnotation {
    pub scores: Vec<f64>,
    pub ignored: BTreeSet<usize>,
}

impl ComplexityAnnotation {
    pub fn with_ignored(mut self, ignored: impl IntoIterator<Item = usize>) -> Self {
        let n = self.scores.len();
        self.ignored.extend(ignored.into_iter().filter(|&i| i < n));
        self
    }
}

/// Scores every token. Punctuation and numbers always score 0.
pub fn score_complexity(
    sentence: &TokenizedSentence,
    scorer: &dyn ComplexityScorer,
) -> ComplexityAnnotation {
    let raw = scorer.score(sentence);
    assert_eq!(
        raw.len(),
        sentence.len(),
        "complexity scorer returned {} scores for {} tokens",
        raw.len(),
        sentence.len()
    );
    let scores = sentence
        .tokens()
        .iter()
        .zip(raw)
        .map(|(tok, p)| {
            if !tok.is_word() || p.is_nan() {
                0.0
            } else {
                p.clamp(0.0, 1.0)
            }
        })
        .collect();
    ComplexityAnnotation {
        scores,
        ignored: BTreeSet::new(),
    }
}

/// Indices with score strictly above `threshold` that are not ignored,
/// highest score first, leftmost first on ties.
pub fn select_complex_words(annotation: &ComplexityAnnotation, threshold: f64) -> Vec<usize> {
    let mut selected: Vec<usize> = annotation
        .scores
        .iter()
        .enumerate()
        .filter(|&(i, &p)| p > threshold && !annotation.ignored.contains(&i))
        .map(|(i, _)| i)
        .collect();
    selected.sort_by(|&a, &b| {
        annotation.scores[b]
            .total_cmp(&annotation.scores[a])
            .then(a.cmp(&b))
    });
    selected
}

/// Named-entity detection over a token list. Spans are `(start, end)` with
/// `end` exclusive.
pub trait EntityRecognizer: Send + Sync {
    fn recognize(&self, tokens: &[String]) -> Result<Vec<(usize, usize)>>;
}

/// Capitalization heuristic.
///
/// A capitalized word is an entity when it is not sentence-initial. A
/// sentence-initial capitalized word is an entity when the same surface
/// occurs capitalized in a non-initial position elsewhere in the sentence
/// or the registered document, or when a lexicon is attached and does not
/// know the lowercased word.
#[derive(Debug, Clone, Default)]
pub struct CapitalizationRecognizer<'a> {
    lexicon: Option<&'a FrequencyStore>,
    document: HashSet<String>,
}

impl<'a> CapitalizationRecognizer<'a> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_lexicon(mut self, lexicon: &'a FrequencyStore) -> Self {
        self.lexicon = Some(lexicon);
        self
    }

    /// Registers surrounding text whose non-initial capitalized words count
    /// as evidence for sentence-initial ones.
    pub fn with_document(mut self, text: &str) -> Self {
        let sentence = TokenizedSentence::tokenize(text);
        let surfaces = sentence.surfaces();
        self.document.extend(non_initial_capitalized(&surfaces));
        self
    }
}

fn is_terminal(tok: &str) -> bool {
    matches!(tok, "." | "!" | "?" | "..." | ";" | ":")
}

fn is_word(tok: &str) -> bool {
    tok.chars().any(char::is_alphabetic)
}

fn is_sentence_initial(tokens: &[String], i: usize) -> bool {
    tokens[..i]
        .iter()
        .rev()
        .find(|t| is_word(t) || is_terminal(t))
        .is_none_or(|t| is_terminal(t))
}

fn non_initial_capitalized(tokens: &[String]) -> impl Iterator<Item = String> + '_ {
    tokens
        .iter()
        .enumerate()
        .filter(|(i, t)| is_word(t) && is_capitalized(t) && !is_sentence_initial(tokens, *i))
        .map(|(_, t)| t.clone())
}

impl EntityRecognizer for CapitalizationRecognizer<'_> {
    fn recognize(&self, tokens: &[String]) -> Result<Vec<(usize, usize)>> {
        let local: HashSet<String> = non_initial_capitalized(tokens).collect();
        let spans = tokens
            .iter()
            .enumerate()
            .filter(|(i, tok)| {
                if !is_word(tok) || !is_capitalized(tok) {
                    return false;
                }
                if !is_sentence_initial(tokens, *i) {
                    return true;
                }
                local.contains(*tok)
                    || self.document.contains(*tok)
                    || self
                        .lexicon
                        .is_some_and(|lex| !lex.contains(&tok.to_lowercase()))
            })
            .map(|(i, _)| (i, i + 1))
            .collect();
        Ok(spans)
    }
}

/// Token indices covered by recognized entities. A failing recognizer
/// yields an empty set and a warning.
pub fn detect_entities(
    sentence: &TokenizedSentence,
    recognizer: &dyn EntityRecognizer,
) -> BTreeSet<usize> {
    let n = sentence.len();
    match recognizer.recognize(&sentence.surfaces()) {
        Ok(spans) => spans
            .into_iter()
            .flat_map(|(start, end)| start.min(n)..end.min(n))
            .collect(),
        Err(e) => {
            warn!("entity recognition failed, continuing without entity protection: {e}");
            BTreeSet::new()
        }
    }
}
