//! Resolved run configuration: config file values overridden by flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use lsbert_core::config::{Feature, GenerationMode, PipelineConfig};
use lsbert_core::mlm::{MlmBackend, MockBackend};
use lsbert_core::resources::{EmbeddingStore, FrequencyStore, ParaphraseStore, Resources};
use lsbert_transformer::{BertBackend, TransformerConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    #[default]
    Transformer,
    Mock,
}

/// Everything a run depends on. Serialized as the config echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub pipeline: PipelineConfig,
    pub backend: BackendKind,
    /// Transformer: directory or hub id. Mock: JSON file (optional).
    pub model: Option<String>,
    pub transformer: TransformerConfig,
    pub embeddings: Option<PathBuf>,
    pub frequency: Option<PathBuf>,
    pub ppdb: Option<PathBuf>,
    pub workers: usize,
    pub out: Option<PathBuf>,
    /// Candidate counts to evaluate; several values make a sweep.
    pub top_k_sweep: Vec<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            pipeline: PipelineConfig::default(),
            backend: BackendKind::default(),
            model: None,
            transformer: TransformerConfig::default(),
            embeddings: None,
            frequency: None,
            ppdb: None,
            workers: 1,
            out: None,
            top_k_sweep: Vec::new(),
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub backend: Option<BackendKind>,
    /// Model directory or hub id (transformer), or a JSON table (mock).
    #[arg(long, value_name = "ID")]
    pub model: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub embeddings: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub frequency: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub ppdb: Option<PathBuf>,
    /// Complexity threshold; words scoring above it are simplified.
    #[arg(long, value_name = "F")]
    pub threshold: Option<f64>,
    /// Candidates per word: N, a list "5,10,20" or a range "5..60[:STEP]".
    #[arg(long, value_name = "N")]
    pub top_k: Option<String>,
    #[arg(long, value_name = "F")]
    pub zipf_min: Option<f64>,
    #[arg(long, value_name = "N")]
    pub lm_window: Option<usize>,
    #[arg(long, value_name = "F")]
    pub mask_prob: Option<f64>,
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<GenerationMode>,
    /// Ranking feature to leave out (repeatable).
    #[arg(long = "disable-feature", value_name = "NAME", value_parser = parse_feature)]
    pub disable_feature: Vec<Feature>,
    /// Keep every top-ranked candidate, skipping the frequency/loss check.
    #[arg(long)]
    pub no_acceptance_condition: bool,
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,
    /// Result file; sidecars PATH.config.json (and PATH.trace.jsonl) go next to it.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<GenerationMode, String> {
    s.parse().map_err(|e: lsbert_core::Error| e.to_string())
}

fn parse_feature(s: &str) -> Result<Feature, String> {
    s.parse().map_err(|e: lsbert_core::Error| e.to_string())
}

/// `N`, `A,B,C` or `A..B[:STEP]` (inclusive, step 5 by default).
pub fn parse_top_k(s: &str) -> Result<Vec<usize>> {
    let num = |t: &str| -> Result<usize> {
        t.trim()
            .parse::<usize>()
            .ok()
            .filter(|&k| k > 0)
            .with_context(|| format!("top-k value {t:?} is not a positive integer"))
    };
    if let Some((lo, rest)) = s.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (hi, num(step)?),
            None => (rest, 5),
        };
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            bail!("empty top-k range {s:?}");
        }
        return Ok((lo..=hi).step_by(step).collect());
    }
    s.split(',').map(num).collect()
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let mut cfg = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => RunConfig::default(),
        };
        let p = &mut cfg.pipeline;
        if let Some(v) = args.threshold {
            p.complexity_threshold = v;
        }
        if let Some(v) = &args.top_k {
            let ks = parse_top_k(v)?;
            p.top_k = ks[0];
            cfg.top_k_sweep = ks;
        }
        if let Some(v) = args.zipf_min {
            p.zipf_filter_min = v;
        }
        if let Some(v) = args.lm_window {
            p.lm_window = v;
        }
        if let Some(v) = args.mask_prob {
            p.context_mask_prob = v;
        }
        if let Some(v) = args.seed {
            p.rng_seed = v;
        }
        if let Some(v) = args.mode {
            p.generation_mode = v;
        }
        for f in &args.disable_feature {
            if !p.disabled_features.contains(f) {
                p.disabled_features.push(*f);
            }
        }
        p.disabled_features.sort();
        if args.no_acceptance_condition {
            p.acceptance_condition = false;
        }
        if let Some(v) = args.backend {
            cfg.backend = v;
        }
        if let Some(v) = &args.model {
            cfg.model = Some(v.clone());
        }
        if let Some(v) = &args.embeddings {
            cfg.embeddings = Some(v.clone());
        }
        if let Some(v) = &args.frequency {
            cfg.frequency = Some(v.clone());
        }
        if let Some(v) = &args.ppdb {
            cfg.ppdb = Some(v.clone());
        }
        if let Some(v) = args.workers {
            cfg.workers = v;
        }
        if let Some(v) = &args.out {
            cfg.out = Some(v.clone());
        }
        if cfg.top_k_sweep.is_empty() {
            cfg.top_k_sweep = vec![cfg.pipeline.top_k];
        }
        if cfg.workers == 0 {
            bail!("--workers must be at least 1");
        }
        if let (BackendKind::Transformer, Some(m)) = (cfg.backend, &cfg.model) {
            cfg.transformer.model = m.clone();
        }
        cfg.pipeline.validate()?;
        Ok(cfg)
    }

    pub fn single_top_k(&self) -> Result<()> {
        if self.top_k_sweep.len() > 1 {
            bail!("a top-k sweep is only supported by eval-ls");
        }
        Ok(())
    }

    /// Checks resource paths before anything is loaded: frequency always,
    /// embeddings and paraphrases unless their feature is disabled.
    pub fn check_resources(&self) -> Result<()> {
        let need = |path: &Option<PathBuf>, flag: &str, why: &str| -> Result<()> {
            match path {
                Some(p) if p.is_file() => Ok(()),
                Some(p) => bail!("{flag} {}: no such file", p.display()),
                None => bail!("{flag} is required ({why})"),
            }
        };
        need(&self.frequency, "--frequency", "complexity scoring and ranking use it")?;
        if self.pipeline.is_enabled(Feature::Similarity) {
            need(&self.embeddings, "--embeddings", "or pass --disable-feature similarity")?;
        }
        if self.pipeline.is_enabled(Feature::Ppdb) {
            need(&self.ppdb, "--ppdb", "or pass --disable-feature ppdb")?;
        }
        if let (BackendKind::Mock, Some(m)) = (self.backend, &self.model) {
            if !Path::new(m).is_file() {
                bail!("--model {m}: mock backend table not found");
            }
        }
        Ok(())
    }

    pub fn load_resources(&self) -> Result<Resources> {
        let frequency = match &self.frequency {
            Some(p) => FrequencyStore::load(p)?,
            None => FrequencyStore::default(),
        };
        let embeddings = match &self.embeddings {
            Some(p) if self.pipeline.is_enabled(Feature::Similarity) => EmbeddingStore::load(p)?,
            _ => EmbeddingStore::default(),
        };
        let paraphrases = match &self.ppdb {
            Some(p) if self.pipeline.is_enabled(Feature::Ppdb) => ParaphraseStore::load(p)?,
            _ => ParaphraseStore::default(),
        };
        Ok(Resources::new(embeddings, frequency, paraphrases))
    }

    pub fn load_backend(&self) -> Result<Box<dyn MlmBackend>> {
        Ok(match self.backend {
            BackendKind::Mock => match &self.model {
                Some(p) => Box::new(MockBackend::load(p)?),
                None => Box::new(MockBackend::default()),
            },
            BackendKind::Transformer => Box::new(BertBackend::load(&self.transformer)?),
        })
    }

    /// Writes the echo to `OUT.config.json`, or to stderr without `--out`.
    pub fn echo(&self) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        match &self.out {
            Some(out) => {
                let path = sidecar(out, "config.json");
                std::fs::write(&path, json + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            None => eprintln!("{json}"),
        }
        Ok(())
    }
}

pub fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}
