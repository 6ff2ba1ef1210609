//! Lexical simplification with a masked language model: complex word
//! identification, candidate generation from sentence pairs, multi-feature
//! ranking and an iterative sentence simplifier, plus benchmark metrics.

pub mod config;
pub mod cwi;
pub mod error;
pub mod evaluation;
pub mod generation;
pub mod mlm;
pub mod pipeline;
pub mod ranking;
pub mod resources;
pub mod text;
pub mod trace;

pub use config::{Feature, GenerationMode, PipelineConfig};
pub use error::{Error, Result};
pub use generation::{generate_candidates, Candidate, CandidateSet};
pub use mlm::{MlmBackend, MlmPrediction, MlmQuery, MockBackend};
pub use pipeline::{simplify_batch, simplify_sentence, simplify_word, SimplifiedResult, Simplifier};
pub use ranking::{rank_candidates, RankingTable};
pub use resources::{EmbeddingStore, FrequencyStore, ParaphraseStore, Resources};
pub use text::{Token, TokenizedSentence};
pub use trace::{SimplificationTrace, TraceStep};
