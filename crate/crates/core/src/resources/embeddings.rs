use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};

/// Word vectors in the plain-text `.vec` layout: an optional
/// `count dimension` header, then `word f1 f2 ...` per line.
///
/// Keys are lowercased. When several casings of a word are present the
/// all-lowercase row is preferred; otherwise the first casing seen is kept.
/// An exact duplicate word overrides the earlier row.
#[derive(Debug, Clone, Default)]
pub struct EmbeddingStore {
    dimension: usize,
    vectors: HashMap<String, Vec<f32>>,
    duplicates: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cosine {
    pub value: f64,
    pub flag: Option<CosineFlag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosineFlag {
    OutOfVocabulary,
    ZeroVector,
}

impl EmbeddingStore {
    pub fn from_vectors<I, S>(dimension: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: AsRef<str>,
    {
        let mut store = Self {
            dimension,
            ..Default::default()
        };
        for (word, v) in rows {
            if v.len() != dimension {
                return Err(Error::Dataset(format!(
                    "vector for {:?} has {} components, expected {dimension}",
                    word.as_ref(),
                    v.len()
                )));
            }
            store.vectors.insert(word.as_ref().to_lowercase(), v);
        }
        Ok(store)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut store = Self::default();
        let mut dimension: Option<usize> = None;
        // whether the stored row for a key came from an all-lowercase surface
        let mut exact_lower: HashMap<String, bool> = HashMap::new();
        let mut seen_surface: std::collections::HashSet<String> = Default::default();

        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::io(path, e))?;
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(' ').filter(|f| !f.is_empty());
            let word = fields.next().unwrap_or_default();
            let rest: Vec<&str> = fields.collect();

            if lineno == 1 && rest.len() == 1 {
                if let (Ok(_count), Ok(dim)) = (word.parse::<usize>(), rest[0].parse::<usize>()) {
                    dimension = Some(dim);
                    continue;
                }
            }

            let vector = rest
                .iter()
                .map(|f| f.parse::<f32>())
                .collect::<std::result::Result<Vec<f32>, _>>()
                .map_err(|_| Error::parse(path, lineno, format!("non-numeric component in row for {word:?}")))?;
            if vector.is_empty() {
                return Err(Error::parse(path, lineno, format!("row for {word:?} has no components")));
            }
            let dim = *dimension.get_or_insert(vector.len());
            if vector.len() != dim {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("ragged row: {} components, expected {dim}", vector.len()),
                ));
            }

            let key = word.to_lowercase();
            let is_lower = key == word;
            let duplicate = !seen_surface.insert(word.to_string());
            if duplicate {
                warn!("{}:{lineno}: duplicate vector for {word:?}; keeping the later row", path.display());
                store.duplicates += 1;
            }
            let keep = match exact_lower.get(&key) {
                None => true,
                Some(_) if is_lower => true,
                Some(&stored_lower) => !stored_lower && duplicate,
            };
            if !keep {
                continue;
            }
            exact_lower.insert(key.clone(), is_lower);
            store.vectors.insert(key, vector);
        }
        store.dimension = dimension.unwrap_or(0);
        Ok(store)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Number of exact-duplicate rows overridden during loading.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    pub fn get(&self, word: &str) -> Option<&[f32]> {
        self.vectors.get(&word.to_lowercase()).map(Vec::as_slice)
    }

    pub fn cosine(&self, a: &str, b: &str) -> Cosine {
        let (Some(va), Some(vb)) = (self.get(a), self.get(b)) else {
            return Cosine {
                value: 0.0,
                flag: Some(CosineFlag::OutOfVocabulary),
            };
        };
        let (mut dot, mut na, mut nb) = (0f64, 0f64, 0f64);
        for (&x, &y) in va.iter().zip(vb) {
            let (x, y) = (x as f64, y as f64);
            dot += x * y;
            na += x * x;
            nb += y * y;
        }
        if na == 0.0 || nb == 0.0 {
            return Cosine {
                value: 0.0,
                flag: Some(CosineFlag::ZeroVector),
            };
        }
        Cosine {
            value: (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0),
            flag: None,
        }
    }
}
