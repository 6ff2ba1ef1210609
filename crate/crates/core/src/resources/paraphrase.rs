use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// Unordered paraphrase pairs. Only membership is kept.
///
/// Accepts `word_a<TAB>word_b` lines; lines in the PPDB ` ||| ` layout are
/// also understood (second and third fields are the pair, scores ignored).
#[derive(Debug, Clone, Default)]
pub struct ParaphraseStore {
    pairs: HashSet<(String, String)>,
}

impl ParaphraseStore {
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut store = Self::default();
        for (a, b) in pairs {
            store.insert(a.as_ref(), b.as_ref());
        }
        store
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut store = Self::default();
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() {
                continue;
            }
            let (a, b) = if line.contains(" ||| ") {
                let mut fields = line.split(" ||| ").skip(1);
                (fields.next(), fields.next())
            } else {
                let mut fields = line.split('\t');
                (fields.next(), fields.next())
            };
            match (a.map(str::trim), b.map(str::trim)) {
                (Some(a), Some(b)) if !a.is_empty() && !b.is_empty() => store.insert(a, b),
                _ => {
                    return Err(Error::parse(path, idx + 1, "expected \"word_a<TAB>word_b\""));
                }
            }
        }
        Ok(store)
    }

    fn insert(&mut self, a: &str, b: &str) {
        self.pairs.insert(key(a, b));
    }

    pub fn contains_pair(&self, a: &str, b: &str) -> bool {
        self.pairs.contains(&key(a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn key(a: &str, b: &str) -> (String, String) {
    let (a, b) = (a.to_lowercase(), b.to_lowercase());
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn symmetric_membership() {
        let s = ParaphraseStore::from_pairs([("composed", "wrote")]);
        assert!(s.contains_pair("wrote", "composed"));
        assert!(s.contains_pair("Composed", "WROTE"));
        assert!(!s.contains_pair("composed", "sang"));
    }

    #[test]
    fn self_pair_only_when_listed() {
        let s = ParaphraseStore::from_pairs([("sat", "seated")]);
        assert!(!s.contains_pair("sat", "sat"));
        let s = ParaphraseStore::from_pairs([("sat", "sat")]);
        assert!(s.contains_pair("sat", "sat"));
    }

    #[test]
    fn loads_tsv_and_ppdb_layout() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "composed\twrote").unwrap();
        writeln!(f, "[VBD] ||| perched ||| sat ||| PPDB2.0Score=3.1 ||| 0-0 ||| Equivalence").unwrap();
        writeln!(f).unwrap();
        let s = ParaphraseStore::load(f.path()).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains_pair("sat", "perched"));
        assert!(s.contains_pair("wrote", "composed"));
    }

    #[test]
    fn malformed_line() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "a\tb").unwrap();
        writeln!(f, "lonely").unwrap();
        let err = ParaphraseStore::load(f.path()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
