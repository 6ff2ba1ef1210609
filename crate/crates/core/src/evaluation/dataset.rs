use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One lexical-simplification benchmark item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldInstance {
    /// Space-tokenized sentence.
    pub sentence: String,
    pub target: String,
    pub target_index: usize,
    /// Human substitutions with their simplicity rank (1 = simplest).
    pub gold: Vec<(u32, String)>,
}

impl GoldInstance {
    pub fn gold_words(&self) -> Vec<&str> {
        self.gold.iter().map(|(_, s)| s.as_str()).collect()
    }
}

/// A sentence with its reference simplifications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TsInstance {
    pub source: String,
    pub references: Vec<String>,
}

/// Parses `sentence<TAB>target<TAB>index<TAB>rank:substitution...`.
pub fn parse_ls_line(line: &str) -> std::result::Result<GoldInstance, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() < 4 {
        return Err(format!(
            "expected sentence, target, index and at least one rank:substitution, got {} fields",
            fields.len()
        ));
    }
    let sentence = fields[0].trim().to_string();
    let target = fields[1].trim().to_string();
    let target_index: usize = fields[2]
        .trim()
        .parse()
        .map_err(|_| format!("target index {:?} is not a non-negative integer", fields[2]))?;

    let words: Vec<&str> = sentence.split_whitespace().collect();
    match words.get(target_index) {
        Some(w) if *w == target => {}
        Some(w) => {
            return Err(format!(
                "token {target_index} is {w:?}, not the target {target:?}"
            ))
        }
        None => {
            return Err(format!(
                "target index {target_index} is past the end of a {}-token sentence",
                words.len()
            ))
        }
    }

    let mut best: HashMap<String, u32> = HashMap::new();
    let mut order: Vec<String> = Vec::new();
    for field in &fields[3..] {
        let field = field.trim();
        if field.is_empty() {
            continue;
        }
        let (rank, sub) = field
            .split_once(':')
            .ok_or_else(|| format!("substitution {field:?} is not rank:word"))?;
        let rank: u32 = rank
            .trim()
            .parse()
            .ok()
            .filter(|&r| r > 0)
            .ok_or_else(|| format!("rank {rank:?} is not a positive integer"))?;
        let sub = sub.trim().to_string();
        if sub.is_empty() {
            return Err("empty substitution".into());
        }
        match best.get_mut(&sub) {
            Some(r) => *r = (*r).min(rank),
            None => {
                best.insert(sub.clone(), rank);
                order.push(sub);
            }
        }
    }
    if order.is_empty() {
        return Err("no gold substitutions".into());
    }
    let gold = order.into_iter().map(|s| (best[&s], s)).collect();
    Ok(GoldInstance {
        sentence,
        target,
        target_index,
        gold,
    })
}

pub fn load_ls_dataset(path: impl AsRef<Path>) -> Result<Vec<GoldInstance>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_ls_line(line).map_err(|m| Error::parse(path, idx + 1, m))?);
    }
    Ok(out)
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text.lines().map(|l| l.trim_end_matches('\r').to_string()).collect())
}

/// Reads line-aligned source and reference files (one reference file per
/// annotator).
pub fn load_ts_dataset(
    source: impl AsRef<Path>,
    references: &[impl AsRef<Path>],
) -> Result<Vec<TsInstance>> {
    if references.is_empty() {
        return Err(Error::Dataset("at least one reference file is required".into()));
    }
    let sources = read_lines(source.as_ref())?;
    let refs = references
        .iter()
        .map(|p| read_lines(p.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    for (p, r) in references.iter().zip(&refs) {
        if r.len() != sources.len() {
            return Err(Error::Dataset(format!(
                "{} has {} lines but the source has {}",
                p.as_ref().display(),
                r.len(),
                sources.len()
            )));
        }
    }
    Ok(sources
        .into_iter()
        .enumerate()
        .map(|(i, source)| TsInstance {
            source,
            references: refs.iter().map(|r| r[i].clone()).collect(),
        })
        .collect())
}

/// Reads a file of system outputs, one per line.
pub fn load_lines(path: impl AsRef<Path>) -> Result<Vec<String>> {
    read_lines(path.as_ref())
}
