//! SARI: agreement of a system output with references on kept, added
//! and deleted n-grams (n = 1..4), relative to the source sentence.
//!
//! Follows the original reference implementation: keep and add use F1,
//! delete uses precision only, and multi-reference counts are compared
//! against source/output counts scaled by the number of references.

use std::collections::{BTreeMap, BTreeSet};

type Counts = BTreeMap<String, usize>;

pub const MAX_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SariComponents {
    pub keep: [f64; MAX_ORDER],
    pub delete: [f64; MAX_ORDER],
    /// Deletion recall, computed for reporting only; SARI ignores it.
    pub delete_recall: [f64; MAX_ORDER],
    pub add: [f64; MAX_ORDER],
}

impl SariComponents {
    fn mean(xs: &[f64; MAX_ORDER]) -> f64 {
        xs.iter().sum::<f64>() / MAX_ORDER as f64
    }

    pub fn keep_score(&self) -> f64 {
        Self::mean(&self.keep)
    }

    pub fn delete_score(&self) -> f64 {
        Self::mean(&self.delete)
    }

    pub fn add_score(&self) -> f64 {
        Self::mean(&self.add)
    }

    /// On the 0-100 scale.
    pub fn sari(&self) -> f64 {
        100.0 * (self.keep_score() + self.delete_score() + self.add_score()) / 3.0
    }
}

fn tokens(s: &str) -> Vec<String> {
    s.to_lowercase().split_whitespace().map(String::from).collect()
}

fn ngrams(tokens: &[String], n: usize) -> Vec<String> {
    if tokens.len() < n {
        return Vec::new();
    }
    tokens.windows(n).map(|w| w.join(" ")).collect()
}

fn count(grams: impl IntoIterator<Item = String>, scale: usize) -> Counts {
    let mut c = Counts::new();
    for g in grams {
        *c.entry(g).or_default() += scale;
    }
    c
}

fn intersect(a: &Counts, b: &Counts) -> Counts {
    a.iter()
        .filter_map(|(g, &x)| {
            let m = x.min(b.get(g).copied().unwrap_or(0));
            (m > 0).then(|| (g.clone(), m))
        })
        .collect()
}

fn subtract(a: &Counts, b: &Counts) -> Counts {
    a.iter()
        .filter_map(|(g, &x)| {
            let d = x.saturating_sub(b.get(g).copied().unwrap_or(0));
            (d > 0).then(|| (g.clone(), d))
        })
        .collect()
}

fn f1(p: f64, r: f64) -> f64 {
    if p > 0.0 || r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

struct OrderScores {
    keep: f64,
    delete: f64,
    delete_recall: f64,
    add: f64,
}

fn order_scores(source: &[String], output: &[String], references: &[Vec<String>]) -> OrderScores {
    let num_refs = references.len();
    let refs = count(references.iter().flatten().cloned(), 1);
    let src = count(source.iter().cloned(), num_refs);
    let out = count(output.iter().cloned(), num_refs);

    // keep
    let keep = intersect(&src, &out);
    let keep_good = intersect(&keep, &refs);
    let keep_all = intersect(&src, &refs);
    let (mut kp, mut kr) = (0.0, 0.0);
    for (g, &good) in &keep_good {
        kp += good as f64 / keep[g] as f64;
        kr += good as f64 / keep_all[g] as f64;
    }
    let keep_precision = if keep.is_empty() { 0.0 } else { kp / keep.len() as f64 };
    let keep_recall = if keep_all.is_empty() { 0.0 } else { kr / keep_all.len() as f64 };

    // delete
    let del = subtract(&src, &out);
    let del_good = subtract(&del, &refs);
    let del_all = subtract(&src, &refs);
    let (mut dp, mut dr) = (0.0, 0.0);
    for (g, &good) in &del_good {
        dp += good as f64 / del[g] as f64;
        dr += good as f64 / del_all[g] as f64;
    }
    let del_precision = if del.is_empty() { 0.0 } else { dp / del.len() as f64 };
    let del_recall = if del_all.is_empty() { 0.0 } else { dr / del_all.len() as f64 };

    // add (set based)
    let src_set: BTreeSet<&String> = src.keys().collect();
    let out_set: BTreeSet<&String> = out.keys().collect();
    let ref_set: BTreeSet<&String> = refs.keys().collect();
    let added: BTreeSet<&String> = out_set.difference(&src_set).copied().collect();
    let add_good = added.intersection(&ref_set).count() as f64;
    let add_all = ref_set.difference(&src_set).count();
    let add_precision = if added.is_empty() { 0.0 } else { add_good / added.len() as f64 };
    let add_recall = if add_all == 0 { 0.0 } else { add_good / add_all as f64 };

    OrderScores {
        keep: f1(keep_precision, keep_recall),
        delete: del_precision,
        delete_recall: del_recall,
        add: f1(add_precision, add_recall),
    }
}

pub fn sari_components<S: AsRef<str>>(source: &str, output: &str, references: &[S]) -> SariComponents {
    let source = tokens(source);
    let output = tokens(output);
    let references: Vec<Vec<String>> = references.iter().map(|r| tokens(r.as_ref())).collect();
    let mut c = SariComponents::default();
    if references.is_empty() {
        return c;
    }
    for n in 1..=MAX_ORDER {
        let refs: Vec<Vec<String>> = references.iter().map(|r| ngrams(r, n)).collect();
        let s = order_scores(&ngrams(&source, n), &ngrams(&output, n), &refs);
        c.keep[n - 1] = s.keep;
        c.delete[n - 1] = s.delete;
        c.delete_recall[n - 1] = s.delete_recall;
        c.add[n - 1] = s.add;
    }
    c
}

/// Sentence-level SARI in [0, 100].
pub fn sari<S: AsRef<str>>(source: &str, output: &str, references: &[S]) -> f64 {
    sari_components(source, output, references).sari()
}

/// Mean sentence SARI over a corpus.
pub fn corpus_sari<S: AsRef<str>>(sources: &[S], outputs: &[S], references: &[Vec<S>]) -> f64 {
    let n = sources.len().min(outputs.len()).min(references.len());
    if n == 0 {
        return 0.0;
    }
    (0..n)
        .map(|i| sari(sources[i].as_ref(), outputs[i].as_ref(), &references[i]))
        .sum::<f64>()
        / n as f64
}
