use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// Word counts from a reference corpus, answered on the Zipf scale.
///
/// File format: a mandatory `#total<TAB>N` header, then `word<TAB>count`
/// lines. Words are lowercased; case variants are summed.
#[derive(Debug, Clone, Default)]
pub struct FrequencyStore {
    counts: HashMap<String, u64>,
    total_tokens: u64,
}

impl FrequencyStore {
    pub fn new(total_tokens: u64) -> Self {
        Self {
            counts: HashMap::new(),
            total_tokens: total_tokens.max(1),
        }
    }

    pub fn from_counts<I, S>(total_tokens: u64, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut store = Self::new(total_tokens);
        for (word, count) in counts {
            store.add(word.as_ref(), count);
        }
        store.check_total().map_err(Error::Dataset)?;
        Ok(store)
    }

    /// A store whose Zipf values are exactly the given ones
    /// (up to rounding of counts over a 10^15-token total).
    pub fn from_zipf<I, S>(values: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        const TOTAL: u64 = 1_000_000_000_000_000;
        let mut store = Self::new(TOTAL);
        for (word, zipf) in values {
            let count = (10f64.powf(zipf + 6.0).round() as u64).min(TOTAL);
            store.add(word.as_ref(), count);
        }
        store
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines();

        let header = match lines.next() {
            Some(line) => line.map_err(|e| Error::io(path, e))?,
            None => return Err(Error::parse(path, 1, "missing \"#total<TAB>N\" header")),
        };
        let total = header
            .trim_end()
            .strip_prefix("#total\t")
            .and_then(|n| n.trim().parse::<u64>().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::parse(path, 1, "expected \"#total<TAB>N\" with N > 0"))?;

        let mut store = Self::new(total);
        for (idx, line) in lines.enumerate() {
            let lineno = idx + 2;
            let line = line.map_err(|e| Error::io(path, e))?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() {
                continue;
            }
            let (word, count) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(path, lineno, "expected \"word<TAB>count\""))?;
            let count = count
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::parse(path, lineno, format!("non-integer count {count:?}")))?;
            store.add(word, count);
        }
        store
            .check_total()
            .map_err(|msg| Error::parse(path, 1, msg))?;
        Ok(store)
    }

    fn add(&mut self, word: &str, count: u64) {
        *self.counts.entry(word.to_lowercase()).or_default() += count;
    }

    fn check_total(&self) -> std::result::Result<(), String> {
        match self.counts.iter().find(|(_, &c)| c > self.total_tokens) {
            Some((w, c)) => Err(format!(
                "count {c} for {w:?} exceeds the declared total {}",
                self.total_tokens
            )),
            None => Ok(()),
        }
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(&word.to_lowercase()).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.count(word) > 0
    }

    /// log10 of occurrences per billion tokens; 0.0 for unseen words.
    pub fn zipf(&self, word: &str) -> f64 {
        match self.count(word) {
            0 => 0.0,
            c => (c as f64 / self.total_tokens as f64 * 1e9).log10(),
        }
    }
}
