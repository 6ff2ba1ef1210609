//! Masked-language-model backend running a BERT checkpoint on the CPU.
//!
//! A model is a directory with `config.json`, weights (`model.safetensors`
//! or `pytorch_model.bin`) and a vocabulary (`tokenizer.json` or
//! `vocab.txt`). A hub id such as `bert-large-uncased-whole-word-masking`
//! is looked up in the local Hugging Face cache; nothing is downloaded.

mod bert;
mod files;

use serde::{Deserialize, Serialize};

pub use bert::BertBackend;
pub use files::{resolve_model_dir, ModelFiles};

pub const DEFAULT_MODEL: &str = "bert-large-uncased-whole-word-masking";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransformerConfig {
    /// Local directory or hub id resolved through the cache.
    pub model: String,
    pub max_seq_len: usize,
    /// Only `"cpu"` is supported.
    pub device: String,
    /// How far down the vocabulary ranking to look for whole-word
    /// predictions before giving up.
    pub whole_word_scan: usize,
    /// Sequences per forward pass when scoring losses.
    pub batch_size: usize,
}

impl Default for TransformerConfig {
    fn default() -> Self {
        Self {
            model: DEFAULT_MODEL.to_string(),
            max_seq_len: 512,
            device: "cpu".to_string(),
            whole_word_scan: 5000,
            batch_size: 16,
        }
    }
}
