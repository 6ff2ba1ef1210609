//! Reference implementations used as test oracles. They are written from
//! the definitions, deliberately without sharing code or structure with
//! the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Rank of `i` among `values` when higher is better: one plus the number of
/// strictly better values plus half the number of other values tied with it.
pub fn pairwise_rank(values: &[f64], i: usize, higher_is_better: bool) -> f64 {
    let mut better = 0.0;
    let mut tied = 0.0;
    for (j, &v) in values.iter().enumerate() {
        if j == i {
            continue;
        }
        if v == values[i] {
            tied += 1.0;
        } else if (v > values[i]) == higher_is_better {
            better += 1.0;
        }
    }
    1.0 + better + tied / 2.0
}

/// Feature columns given as (values, kind) with kind 'L' lower-better,
/// 'H' higher-better, 'R' already a rank.
pub fn brute_force_best(
    candidates: &[String],
    prediction_ranks: &[f64],
    columns: &[(Vec<f64>, char)],
) -> (usize, Vec<f64>) {
    let n = candidates.len();
    let mut averages = vec![0.0; n];
    for i in 0..n {
        let mut total = 0.0;
        for (values, kind) in columns {
            total += match kind {
                'L' => pairwise_rank(values, i, false),
                'H' => pairwise_rank(values, i, true),
                _ => values[i].max(1.0),
            };
        }
        averages[i] = total / columns.len() as f64;
    }
    // the winner is the candidate no other candidate beats
    let beats = |a: usize, b: usize| {
        if averages[a] != averages[b] {
            return averages[a] < averages[b];
        }
        if prediction_ranks[a] != prediction_ranks[b] {
            return prediction_ranks[a] < prediction_ranks[b];
        }
        candidates[a] < candidates[b]
    };
    let best = (0..n)
        .find(|&i| (0..n).all(|j| j == i || !beats(j, i)))
        .expect("a minimum exists");
    (best, averages)
}

fn grams(sentence: &str, n: usize) -> Vec<String> {
    let words: Vec<String> = sentence.split_whitespace().map(|w| w.to_lowercase()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i + n <= words.len() {
        out.push(words[i..i + n].join(" "));
        i += 1;
    }
    out
}

fn occurrences(list: &[String], g: &str) -> f64 {
    list.iter().filter(|x| x.as_str() == g).count() as f64
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// SARI computed gram by gram from the counting definitions.
pub fn sari_oracle(source: &str, output: &str, references: &[&str]) -> f64 {
    let r = references.len() as f64;
    let mut keep_total = 0.0;
    let mut del_total = 0.0;
    let mut add_total = 0.0;
    for n in 1..=4 {
        let s = grams(source, n);
        let c = grams(output, n);
        let refs: Vec<String> = references.iter().flat_map(|x| grams(x, n)).collect();
        let universe: BTreeSet<&String> = s.iter().chain(&c).chain(&refs).collect();

        let (mut kp_sum, mut kp_den, mut kr_sum, mut kr_den) = (0.0, 0.0, 0.0, 0.0);
        let (mut dp_sum, mut dp_den) = (0.0, 0.0);
        let (mut add_cand, mut add_good, mut add_possible) = (0.0, 0.0, 0.0);
        for g in universe {
            let cs = occurrences(&s, g) * r;
            let cc = occurrences(&c, g) * r;
            let cr = occurrences(&refs, g);

            let kept = cs.min(cc);
            let kept_good = kept.min(cr);
            let keep_possible = cs.min(cr);
            if kept > 0.0 {
                kp_den += 1.0;
                kp_sum += kept_good / kept;
            }
            if keep_possible > 0.0 {
                kr_den += 1.0;
                kr_sum += kept_good / keep_possible;
            }

            let deleted = (cs - cc).max(0.0);
            let deleted_good = (deleted - cr).max(0.0);
            if deleted > 0.0 {
                dp_den += 1.0;
                dp_sum += deleted_good / deleted;
            }

            let in_s = cs > 0.0;
            if cc > 0.0 && !in_s {
                add_cand += 1.0;
                if cr > 0.0 {
                    add_good += 1.0;
                }
            }
            if cr > 0.0 && !in_s {
                add_possible += 1.0;
            }
        }
        let kp = if kp_den > 0.0 { kp_sum / kp_den } else { 0.0 };
        let kr = if kr_den > 0.0 { kr_sum / kr_den } else { 0.0 };
        keep_total += harmonic(kp, kr);
        del_total += if dp_den > 0.0 { dp_sum / dp_den } else { 0.0 };
        let ap = if add_cand > 0.0 { add_good / add_cand } else { 0.0 };
        let ar = if add_possible > 0.0 { add_good / add_possible } else { 0.0 };
        add_total += harmonic(ap, ar);
    }
    100.0 * (keep_total / 4.0 + del_total / 4.0 + add_total / 4.0) / 3.0
}

/// Character-level splice: replace `text[start..end]` with `replacement`.
pub fn splice(text: &str, start: usize, end: usize, replacement: &str) -> String {
    let mut out = String::new();
    out.push_str(&text[..start]);
    out.push_str(replacement);
    out.push_str(&text[end..]);
    out
}

/// Small deterministic generator (xorshift64*) so oracle sweeps do not
/// depend on the library's RNG plumbing.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0.max(1);
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

/// Ten generation instances: (generated, gold).
pub const SG_FIXTURE: [(&[&str], &[&str]); 10] = [
    (&["sat", "seated", "hopped"], &["sat", "rested"]),
    (&["big", "large"], &["large", "big"]),
    (&["a"], &["b"]),
    (&[], &["x"]),
    (&["Easy", "simple", "plain", "clear"], &["easy"]),
    (&["tough", "hard"], &["hard", "tough", "difficult", "tricky"]),
    (&["go", "went", "gone"], &["went"]),
    (&["x", "y"], &["y", "z", "w"]),
    (&["same", "same"], &["same"]),
    (&["m", "n", "o", "p", "q"], &["q", "r"]),
];
/// Worked by hand: precisions 1/3, 1, 0, 0, 1/4, 1, 1/3, 1/2, 1, 1/5.
pub const SG_FIXTURE_PRECISION: f64 = 277.0 / 600.0;
/// Recalls 1/2, 1, 0, 0, 1, 1/2, 1, 1/3, 1, 1/2.
pub const SG_FIXTURE_RECALL: f64 = 7.0 / 12.0;

/// Ten pipeline outcomes: (replacement, original, gold).
pub const PIPELINE_FIXTURE: [(&str, &str, &[&str]); 10] = [
    ("sat", "perched", &["sat", "rested"]),
    ("perched", "perched", &["sat"]),
    ("hopped", "perched", &["sat"]),
    ("Tough", "competitive", &["tough", "hard"]),
    ("competitive", "Competitive", &["hard"]),
    ("wrote", "composed", &["wrote", "made"]),
    ("made", "composed", &["wrote"]),
    ("big", "enormous", &["big", "huge"]),
    ("enormous", "enormous", &["enormous"]),
    ("huge", "enormous", &["large"]),
];
/// Unchanged or gold: rows 1, 2, 4, 5, 6, 8, 9.
pub const PIPELINE_FIXTURE_PRECISION: f64 = 0.7;
/// Changed and gold: rows 1, 4, 6, 8.
pub const PIPELINE_FIXTURE_ACCURACY: f64 = 0.4;

use lsbert_core::mlm::{MlmBackend, MlmPrediction, MlmQuery, TokenLoss};
use lsbert_core::resources::{EmbeddingStore, FrequencyStore, ParaphraseStore, Resources};

/// Offers the same candidates for every query. The loss of any request is
/// the value of the first keyed word found in the sentence, else 1.0, so
/// the mean window loss of a substituted sentence is set directly.
pub struct LossTableBackend {
    pub candidates: Vec<(String, f64)>,
    pub losses: Vec<(String, f64)>,
}

impl LossTableBackend {
    pub fn new(candidates: &[&str], losses: &[(&str, f64)]) -> Self {
        Self {
            candidates: candidates
                .iter()
                .enumerate()
                .map(|(i, w)| (w.to_string(), 0.5 / (i + 1) as f64))
                .collect(),
            losses: losses.iter().map(|(w, l)| (w.to_string(), *l)).collect(),
        }
    }
}

impl MlmBackend for LossTableBackend {
    fn predict_masked(&self, _query: &MlmQuery, k: usize) -> lsbert_core::Result<MlmPrediction> {
        Ok(MlmPrediction {
            entries: self.candidates.iter().take(k).cloned().collect(),
        })
    }

    fn token_loss(&self, tokens: &[String], _position: usize, _target: &str) -> lsbert_core::Result<TokenLoss> {
        let nats = tokens
            .iter()
            .find_map(|t| self.losses.iter().find(|(w, _)| w == t).map(|(_, l)| *l))
            .unwrap_or(1.0);
        Ok(TokenLoss { nats, decomposed: false })
    }
}

pub fn zipf_resources(freq: &[(&str, f64)]) -> Resources {
    Resources::new(
        EmbeddingStore::default(),
        FrequencyStore::from_zipf(freq.iter().copied()),
        ParaphraseStore::default(),
    )
}

/// Vocabulary for random sentences, with Zipf values spanning common,
/// rare and unknown words. Includes the mock backend's toy vocabulary so
/// its fallback predictions have known frequencies.
pub const RANDOM_LEXICON: [(&str, f64); 28] = [
    ("the", 7.0), ("a", 6.9), ("of", 6.8), ("cat", 5.0), ("dog", 5.0), ("sat", 5.0),
    ("mat", 4.0), ("verses", 3.3), ("perched", 2.8), ("abstruse", 1.5), ("composed", 3.1),
    ("poet", 4.0), ("good", 6.0), ("big", 5.5), ("small", 5.4), ("new", 6.0), ("old", 5.6),
    ("make", 5.9), ("use", 5.7), ("show", 5.6), ("go", 6.1), ("see", 6.0), ("help", 5.8),
    ("way", 6.0), ("part", 5.5), ("place", 2.9), ("time", 6.2), ("work", 2.5),
];

const EXTRA_WORDS: [&str; 8] = ["zorp", "Paris", "London", "quixotic", ",", ".", "1999", "Obscure"];

pub fn random_sentence(rng: &mut XorShift, max_len: usize) -> String {
    let len = 1 + rng.below(max_len);
    (0..len)
        .map(|_| {
            if rng.below(5) == 0 {
                *rng.pick(&EXTRA_WORDS)
            } else {
                rng.pick(&RANDOM_LEXICON).0
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
