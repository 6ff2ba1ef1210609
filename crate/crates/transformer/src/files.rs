use std::path::{Path, PathBuf};

use lsbert_core::{Error, Result};

/// The files a checkpoint directory provides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFiles {
    pub dir: PathBuf,
    pub config: PathBuf,
    pub weights: PathBuf,
    /// `tokenizer.json` when present, otherwise `vocab.txt`.
    pub tokenizer: PathBuf,
    pub tokenizer_config: Option<PathBuf>,
}

impl ModelFiles {
    pub fn in_dir(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        let first = |names: &[&str]| names.iter().map(|n| dir.join(n)).find(|p| p.is_file());
        let missing = |what: &str| Error::Backend(format!("{} has no {what}", dir.display()));

        let config = first(&["config.json"]).ok_or_else(|| missing("config.json"))?;
        let weights = first(&["model.safetensors", "pytorch_model.bin"])
            .ok_or_else(|| missing("model.safetensors or pytorch_model.bin"))?;
        let tokenizer = first(&["tokenizer.json", "vocab.txt"])
            .ok_or_else(|| missing("tokenizer.json or vocab.txt"))?;
        let tokenizer_config = first(&["tokenizer_config.json"]);
        Ok(Self {
            dir,
            config,
            weights,
            tokenizer,
            tokenizer_config,
        })
    }
}

fn hub_cache() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("HF_HUB_CACHE") {
        return Some(PathBuf::from(p));
    }
    if let Some(p) = std::env::var_os("HF_HOME") {
        return Some(PathBuf::from(p).join("hub"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache/huggingface/hub"))
}

fn cached_snapshot(cache: &Path, model: &str) -> Option<PathBuf> {
    let repo = cache.join(format!("models--{}", model.replace('/', "--")));
    let snapshots = repo.join("snapshots");
    if let Ok(rev) = std::fs::read_to_string(repo.join("refs/main")) {
        let dir = snapshots.join(rev.trim());
        if dir.is_dir() {
            return Some(dir);
        }
    }
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(&snapshots)
        .ok()?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    dirs.pop()
}

/// Maps a directory path or hub id to a local checkpoint directory.
pub fn resolve_model_dir(model: &str) -> Result<PathBuf> {
    let path = Path::new(model);
    if path.is_dir() {
        return Ok(path.to_path_buf());
    }
    if let Some(dir) = hub_cache().and_then(|c| cached_snapshot(&c, model)) {
        return Ok(dir);
    }
    Err(Error::Backend(format!(
        "model {model:?} is neither a directory nor in the local Hugging Face cache; \
         download it first or pass a checkpoint directory"
    )))
}
