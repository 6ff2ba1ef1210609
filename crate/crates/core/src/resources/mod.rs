//! External knowledge used for ranking: word vectors, corpus frequencies
//! and paraphrase pairs. All stores are immutable once loaded.

mod embeddings;
mod frequency;
mod paraphrase;

pub use embeddings::{Cosine, CosineFlag, EmbeddingStore};
pub use frequency::FrequencyStore;
pub use paraphrase::ParaphraseStore;

#[derive(Debug, Clone, Default)]
pub struct Resources {
    pub embeddings: EmbeddingStore,
    pub frequency: FrequencyStore,
    pub paraphrases: ParaphraseStore,
}

impl Resources {
    pub fn new(
        embeddings: EmbeddingStore,
        frequency: FrequencyStore,
        paraphrases: ParaphraseStore,
    ) -> Self {
        Self {
            embeddings,
            frequency,
            paraphrases,
        }
    }
}
