//! Benchmark loading and metrics: generation PRE/RE/F1, pipeline PRE/ACC,
//! SARI and Flesch reading ease.

mod dataset;
mod metrics;
mod readability;
mod sari;

pub use dataset::{load_lines, load_ls_dataset, load_ts_dataset, parse_ls_line, GoldInstance, TsInstance};
pub use metrics::{eval_pipeline, eval_sg, PipelineHit, PipelineReport, SgReport, SgScores};
pub use readability::{corpus_fres, count_syllables, fres, fres_from_counts, text_counts, TextCounts};
pub use sari::{corpus_sari, sari, sari_components, SariComponents};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::generation::generate_candidates;
use crate::mlm::MlmBackend;
use crate::pipeline::Simplifier;
use crate::resources::Resources;
use crate::text::TokenizedSentence;

/// Generated candidates for one benchmark item and their scores against
/// the gold list. Complex word identification is not involved: the target
/// is given.
pub fn generation_instance(
    instance: &GoldInstance,
    config: &PipelineConfig,
    backend: &dyn MlmBackend,
) -> Result<(Vec<String>, SgScores)> {
    let sentence = TokenizedSentence::from_whitespace(&instance.sentence);
    let set = generate_candidates(&sentence, instance.target_index, config, backend)?;
    let scores = eval_sg(&set.surfaces(), &instance.gold_words());
    Ok((set.surfaces().into_iter().map(String::from).collect(), scores))
}

/// Generation, ranking and the acceptance test on one benchmark item.
/// Returns the final word (the target itself when nothing was accepted).
pub fn pipeline_instance(
    instance: &GoldInstance,
    simplifier: &Simplifier,
) -> Result<(String, PipelineHit)> {
    let sentence = TokenizedSentence::from_whitespace(&instance.sentence);
    let (chosen, _) = simplifier.simplify_word(&sentence, instance.target_index)?;
    let replacement = chosen.unwrap_or_else(|| instance.target.clone());
    let hit = eval_pipeline(&replacement, &instance.target, &instance.gold_words());
    Ok((replacement, hit))
}

pub fn evaluate_generation(
    instances: &[GoldInstance],
    config: &PipelineConfig,
    backend: &dyn MlmBackend,
) -> Result<SgReport> {
    if instances.is_empty() {
        return Err(Error::Dataset("empty dataset".into()));
    }
    let scores = instances
        .iter()
        .map(|inst| generation_instance(inst, config, backend).map(|(_, s)| s))
        .collect::<Result<Vec<_>>>()?;
    Ok(SgReport::from_instances(&scores))
}

pub fn evaluate_full(
    instances: &[GoldInstance],
    config: &PipelineConfig,
    resources: &Resources,
    backend: &dyn MlmBackend,
) -> Result<PipelineReport> {
    if instances.is_empty() {
        return Err(Error::Dataset("empty dataset".into()));
    }
    let simplifier = Simplifier::new(config.clone(), resources, backend)?;
    let outcomes = instances
        .iter()
        .map(|inst| pipeline_instance(inst, &simplifier))
        .collect::<Result<Vec<_>>>()?;
    Ok(PipelineReport::from_outcomes(instances, &outcomes))
}
