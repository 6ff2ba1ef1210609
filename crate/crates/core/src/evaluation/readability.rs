//! Flesch reading ease.

use crate::text::TokenizedSentence;

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Vowel-group heuristic: count maximal runs of a/e/i/o/u/y, drop a silent
/// final "e" unless it is the only group, never return less than 1.
pub fn count_syllables(word: &str) -> usize {
    let chars: Vec<char> = word
        .to_lowercase()
        .chars()
        .filter(|c| c.is_alphabetic())
        .collect();
    let mut groups = 0;
    let mut prev_vowel = false;
    for &c in &chars {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    let n = chars.len();
    let silent_e = n >= 2 && chars[n - 1] == 'e' && !is_vowel(chars[n - 2]);
    if silent_e && groups > 1 {
        groups -= 1;
    }
    groups.max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TextCounts {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
}

/// Words are tokens with a letter or digit; sentences are runs of
/// terminal punctuation (at least one).
pub fn text_counts(text: &str) -> TextCounts {
    let tokens = TokenizedSentence::tokenize(text);
    let mut counts = TextCounts::default();
    for tok in tokens.tokens() {
        if tok.is_punctuation() {
            if tok.surface.contains(['.', '!', '?']) {
                counts.sentences += 1;
            }
        } else {
            counts.words += 1;
            counts.syllables += count_syllables(&tok.surface);
        }
    }
    counts.sentences = counts.sentences.max(1);
    counts
}

pub fn fres_from_counts(words: usize, sentences: usize, syllables: usize) -> f64 {
    if words == 0 {
        return 0.0;
    }
    let words = words as f64;
    206.835 - 1.015 * (words / sentences.max(1) as f64) - 84.6 * (syllables as f64 / words)
}

pub fn fres(text: &str) -> f64 {
    let c = text_counts(text);
    fres_from_counts(c.words, c.sentences, c.syllables)
}

/// Readability of a corpus treated as one text (one sentence per line).
pub fn corpus_fres<S: AsRef<str>>(lines: &[S]) -> f64 {
    let mut total = TextCounts::default();
    for line in lines {
        let c = text_counts(line.as_ref());
        total.words += c.words;
        total.sentences += c.sentences;
        total.syllables += c.syllables;
    }
    fres_from_counts(total.words, total.sentences, total.syllables)
}
