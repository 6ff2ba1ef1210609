use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{check_position, is_whole_word, MlmBackend, MlmPrediction, MlmQuery, TokenLoss, MASK};
use crate::error::{Error, Result};

/// Vocabulary of the uniform fallback distribution.
pub const DEFAULT_TOY_VOCABULARY: [&str; 16] = [
    "good", "big", "small", "new", "old", "make", "use", "show", "go", "see", "help", "way",
    "part", "place", "time", "work",
];

/// JSON layout of a mock backend file.
///
/// ```json
/// {
///   "predictions": { "the cat [MASK] on the mat": [["sat", 0.5], ["seated", 0.3]] },
///   "vocabulary": ["good", "big"],
///   "oov_probability": 1e-6
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MockConfig {
    pub predictions: HashMap<String, Vec<(String, f64)>>,
    pub vocabulary: Vec<String>,
    /// Probability assumed for a loss target that the relevant
    /// distribution does not contain.
    pub oov_probability: f64,
}

impl Default for MockConfig {
    fn default() -> Self {
        Self {
            predictions: HashMap::new(),
            vocabulary: DEFAULT_TOY_VOCABULARY.iter().map(|s| s.to_string()).collect(),
            oov_probability: 1e-6,
        }
    }
}

/// Deterministic lookup-table backend.
///
/// Queries are matched by [`MlmQuery::fingerprint`]. Unconfigured queries get
/// a uniform distribution over the toy vocabulary.
#[derive(Debug, Clone, Default)]
pub struct MockBackend {
    config: MockConfig,
}

impl MockBackend {
    pub fn new(config: MockConfig) -> Result<Self> {
        for (key, dist) in &config.predictions {
            if let Some((w, p)) = dist.iter().find(|(_, p)| !(*p > 0.0 && *p <= 1.0)) {
                return Err(Error::Backend(format!(
                    "mock entry {key:?}: probability {p} for {w:?} is outside (0, 1]"
                )));
            }
        }
        if !(config.oov_probability > 0.0 && config.oov_probability <= 1.0) {
            return Err(Error::Backend("oov_probability must be in (0, 1]".into()));
        }
        Ok(Self { config })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config: MockConfig = serde_json::from_str(&text).map_err(|e| {
            Error::parse(path, e.line(), format!("invalid mock backend file: {e}"))
        })?;
        Self::new(config)
    }

    /// Adds or replaces the distribution for a fingerprint.
    pub fn with<S: Into<String>>(mut self, fingerprint: S, dist: &[(&str, f64)]) -> Self {
        self.config.predictions.insert(
            fingerprint.into(),
            dist.iter().map(|(w, p)| (w.to_string(), *p)).collect(),
        );
        self
    }

    pub fn config(&self) -> &MockConfig {
        &self.config
    }

    fn distribution(&self, fingerprint: &str) -> Option<&[(String, f64)]> {
        self.config.predictions.get(fingerprint).map(Vec::as_slice)
    }

    fn uniform(&self) -> Vec<(String, f64)> {
        let p = 1.0 / self.config.vocabulary.len().max(1) as f64;
        self.config
            .vocabulary
            .iter()
            .map(|w| (w.clone(), p))
            .collect()
    }
}

impl MlmBackend for MockBackend {
    fn predict_masked(&self, query: &MlmQuery, k: usize) -> Result<MlmPrediction> {
        if k == 0 {
            return Err(Error::Backend("k must be at least 1".into()));
        }
        query.validate()?;
        let mut entries: Vec<(String, f64)> = match self.distribution(&query.fingerprint()) {
            Some(dist) => dist.to_vec(),
            None => self.uniform(),
        };
        // stable sort keeps file order among equal probabilities
        entries.sort_by(|a, b| b.1.total_cmp(&a.1));
        let mut seen = std::collections::HashSet::new();
        entries.retain(|(w, _)| is_whole_word(w) && seen.insert(w.clone()));
        entries.truncate(k);
        Ok(MlmPrediction { entries })
    }

    fn token_loss(&self, tokens: &[String], position: usize, target: &str) -> Result<TokenLoss> {
        check_position(tokens, position, target)?;
        let mut masked = tokens.to_vec();
        masked[position] = MASK.to_string();
        let key = masked.join(" ");
        let found = match self.distribution(&key) {
            Some(dist) => dist
                .iter()
                .find(|(w, _)| w.eq_ignore_ascii_case(target))
                .map(|(_, p)| *p),
            None => self
                .config
                .vocabulary
                .iter()
                .any(|w| w.eq_ignore_ascii_case(target))
                .then(|| 1.0 / self.config.vocabulary.len() as f64),
        };
        Ok(match found {
            Some(p) => TokenLoss {
                nats: -p.ln(),
                decomposed: false,
            },
            None => TokenLoss {
                nats: -self.config.oov_probability.ln(),
                decomposed: true,
            },
        })
    }
}
