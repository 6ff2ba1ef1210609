//! Narrow interface over a masked language model.
//!
//! Queries are expressed in whole words; a backend is responsible for its
//! own subword handling. Two implementations exist: [`MockBackend`] here
//! and a transformer adapter in a separate crate.

mod mock;

pub use mock::{MockBackend, MockConfig, DEFAULT_TOY_VOCABULARY};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sentinel for a masked word slot.
pub const MASK: &str = "[MASK]";
pub const SEP: &str = "[SEP]";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Segment {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub segment: Segment,
    pub index: usize,
}

/// One or two word segments and the slot whose distribution is wanted.
///
/// When `masked` is true the slot holds [`MASK`]; other [`MASK`] tokens
/// may appear as context masking. When false, the original word stays in
/// place and the prediction is read at its position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlmQuery {
    pub segment_a: Vec<String>,
    pub segment_b: Option<Vec<String>>,
    pub target: Slot,
    pub masked: bool,
}

impl MlmQuery {
    pub fn single_masked(mut tokens: Vec<String>, index: usize) -> Self {
        if let Some(t) = tokens.get_mut(index) {
            *t = MASK.to_string();
        }
        Self {
            segment_a: tokens,
            segment_b: None,
            target: Slot {
                segment: Segment::A,
                index,
            },
            masked: true,
        }
    }

    pub fn single_unmasked(tokens: Vec<String>, index: usize) -> Self {
        Self {
            segment_a: tokens,
            segment_b: None,
            target: Slot {
                segment: Segment::A,
                index,
            },
            masked: false,
        }
    }

    /// `context` is shown first, `masked` second with its target slot masked.
    pub fn pair(context: Vec<String>, mut masked: Vec<String>, index: usize) -> Self {
        if let Some(t) = masked.get_mut(index) {
            *t = MASK.to_string();
        }
        Self {
            segment_a: context,
            segment_b: Some(masked),
            target: Slot {
                segment: Segment::B,
                index,
            },
            masked: true,
        }
    }

    pub fn segment(&self, segment: Segment) -> Option<&[String]> {
        match segment {
            Segment::A => Some(&self.segment_a),
            Segment::B => self.segment_b.as_deref(),
        }
    }

    pub fn target_token(&self) -> Option<&str> {
        self.segment(self.target.segment)?
            .get(self.target.index)
            .map(String::as_str)
    }

    pub fn validate(&self) -> Result<()> {
        let seg = self.segment(self.target.segment).ok_or_else(|| {
            Error::Backend("query targets segment B but has no second segment".into())
        })?;
        let token = seg.get(self.target.index).ok_or(Error::PositionOutOfRange {
            position: self.target.index,
            len: seg.len(),
        })?;
        if self.masked && token != MASK {
            return Err(Error::Backend(format!(
                "masked query must hold {MASK} at its target slot, found {token:?}"
            )));
        }
        if !self.masked && token == MASK {
            return Err(Error::Backend("unmasked query has a mask at its target slot".into()));
        }
        Ok(())
    }

    /// Stable text key: words joined by spaces, segments joined by
    /// ` [SEP] `, the target shown as `[MASK]` (masked) or `[[word]]`
    /// (unmasked).
    pub fn fingerprint(&self) -> String {
        let render = |segment: Segment, tokens: &[String]| -> String {
            tokens
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    if !self.masked && segment == self.target.segment && i == self.target.index {
                        format!("[[{t}]]")
                    } else {
                        t.clone()
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = render(Segment::A, &self.segment_a);
        if let Some(b) = &self.segment_b {
            out.push(' ');
            out.push_str(SEP);
            out.push(' ');
            out.push_str(&render(Segment::B, b));
        }
        out
    }
}

/// Whole-word predictions, most probable first.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MlmPrediction {
    pub entries: Vec<(String, f64)>,
}

impl MlmPrediction {
    pub fn words(&self) -> Vec<&str> {
        self.entries.iter().map(|(w, _)| w.as_str()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TokenLoss {
    /// Cross-entropy in nats.
    pub nats: f64,
    /// The target was not a single vocabulary item and its loss was
    /// derived from a subword decomposition (or a floor probability).
    pub decomposed: bool,
}

/// A single `token_loss` request, for batched evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LossRequest {
    pub tokens: Vec<String>,
    pub position: usize,
    pub target: String,
}

pub trait MlmBackend: Send + Sync {
    /// At most `k` whole-word predictions for the query's target slot.
    fn predict_masked(&self, query: &MlmQuery, k: usize) -> Result<MlmPrediction>;

    /// `-ln p(target | tokens with position masked)`.
    fn token_loss(&self, tokens: &[String], position: usize, target: &str) -> Result<TokenLoss>;

    fn token_losses(&self, requests: &[LossRequest]) -> Result<Vec<TokenLoss>> {
        requests
            .iter()
            .map(|r| self.token_loss(&r.tokens, r.position, &r.target))
            .collect()
    }
}

impl<T: MlmBackend + ?Sized> MlmBackend for &T {
    fn predict_masked(&self, query: &MlmQuery, k: usize) -> Result<MlmPrediction> {
        (**self).predict_masked(query, k)
    }

    fn token_loss(&self, tokens: &[String], position: usize, target: &str) -> Result<TokenLoss> {
        (**self).token_loss(tokens, position, target)
    }

    fn token_losses(&self, requests: &[LossRequest]) -> Result<Vec<TokenLoss>> {
        (**self).token_losses(requests)
    }
}

/// Tokens a backend should never offer as a substitute: subword
/// continuations, special symbols and punctuation.
pub fn is_whole_word(token: &str) -> bool {
    !token.starts_with("##")
        && !(token.starts_with('[') && token.ends_with(']'))
        && !(token.starts_with('<') && token.ends_with('>'))
        && token.chars().any(char::is_alphanumeric)
}

pub(crate) fn check_position(tokens: &[String], position: usize, target: &str) -> Result<()> {
    if position >= tokens.len() {
        return Err(Error::PositionOutOfRange {
            position,
            len: tokens.len(),
        });
    }
    if target.is_empty() {
        return Err(Error::Backend("empty loss target".into()));
    }
    Ok(())
}
