//! Offset-preserving tokenization.
//!
//! A [`TokenizedSentence`] keeps the original text untouched and records
//! byte spans for every token, so the text can always be reconstructed
//! exactly and a single token can be swapped without disturbing the
//! surrounding whitespace or punctuation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    /// Byte offset of the first character in the sentence text.
    pub start: usize,
    /// Byte offset one past the last character.
    pub end: usize,
}

impl Token {
    /// True when the token has no letters or digits.
    pub fn is_punctuation(&self) -> bool {
        is_punctuation(&self.surface)
    }

    pub fn is_numeric(&self) -> bool {
        is_numeric(&self.surface)
    }

    /// Words are the only tokens that can ever be simplification targets.
    pub fn is_word(&self) -> bool {
        !self.is_punctuation() && !self.is_numeric()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedSentence {
    text: String,
    tokens: Vec<Token>,
}

impl TokenizedSentence {
    /// Splits on whitespace and peels leading/trailing punctuation off into
    /// tokens of their own. Case is preserved.
    pub fn tokenize(text: &str) -> Self {
        let mut tokens = Vec::new();
        for (chunk_start, chunk) in whitespace_chunks(text) {
            split_chunk(chunk, chunk_start, &mut tokens);
        }
        Self {
            text: text.to_string(),
            tokens,
        }
    }

    /// Treats every whitespace-separated chunk as one token. Used for
    /// benchmark files that are already tokenized.
    pub fn from_whitespace(text: &str) -> Self {
        let tokens = whitespace_chunks(text)
            .map(|(start, chunk)| Token {
                surface: chunk.to_string(),
                start,
                end: start + chunk.len(),
            })
            .collect();
        Self {
            text: text.to_string(),
            tokens,
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Reconstructs the sentence. Offsets cover everything, so this is the
    /// original text byte for byte.
    pub fn detokenize(&self) -> String {
        self.text.clone()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, position: usize) -> Result<&Token> {
        self.tokens.get(position).ok_or(Error::PositionOutOfRange {
            position,
            len: self.tokens.len(),
        })
    }

    pub fn surfaces(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.surface.clone()).collect()
    }

    /// Returns a new sentence where only the token at `position` differs.
    pub fn replace_token(&self, position: usize, replacement: &str) -> Result<Self> {
        let target = self.token(position)?;
        if replacement.is_empty() || replacement.chars().any(char::is_whitespace) {
            return Err(Error::InvalidReplacement(replacement.to_string()));
        }

        let mut text = String::with_capacity(self.text.len() + replacement.len());
        text.push_str(&self.text[..target.start]);
        text.push_str(replacement);
        text.push_str(&self.text[target.end..]);

        let delta = replacement.len() as isize - (target.end - target.start) as isize;
        let tokens = self
            .tokens
            .iter()
            .enumerate()
            .map(|(i, tok)| match i.cmp(&position) {
                std::cmp::Ordering::Less => tok.clone(),
                std::cmp::Ordering::Equal => Token {
                    surface: replacement.to_string(),
                    start: tok.start,
                    end: tok.start + replacement.len(),
                },
                std::cmp::Ordering::Greater => Token {
                    surface: tok.surface.clone(),
                    start: (tok.start as isize + delta) as usize,
                    end: (tok.end as isize + delta) as usize,
                },
            })
            .collect();

        Ok(Self { text, tokens })
    }
}

fn whitespace_chunks(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = text;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let skipped = rest.len() - rest.trim_start().len();
        offset += skipped;
        rest = &rest[skipped..];
        if rest.is_empty() {
            return None;
        }
        let len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let chunk = (offset, &rest[..len]);
        offset += len;
        rest = &rest[len..];
        Some(chunk)
    })
}

fn split_chunk(chunk: &str, base: usize, out: &mut Vec<Token>) {
    let core_start = chunk
        .char_indices()
        .find(|(_, c)| c.is_alphanumeric())
        .map(|(i, _)| i);
    let Some(core_start) = core_start else {
        push_punct_runs(chunk, base, out);
        return;
    };
    let core_end = chunk
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_alphanumeric())
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(chunk.len());

    push_punct_runs(&chunk[..core_start], base, out);
    out.push(Token {
        surface: chunk[core_start..core_end].to_string(),
        start: base + core_start,
        end: base + core_end,
    });
    push_punct_runs(&chunk[core_end..], base + core_end, out);
}

/// Emits one token per run of identical punctuation characters ("..." stays whole).
fn push_punct_runs(s: &str, base: usize, out: &mut Vec<Token>) {
    let mut chars = s.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        let mut end = start + c.len_utf8();
        while let Some(&(i, next)) = chars.peek() {
            if next != c {
                break;
            }
            end = i + next.len_utf8();
            chars.next();
        }
        out.push(Token {
            surface: s[start..end].to_string(),
            start: base + start,
            end: base + end,
        });
    }
}

pub fn is_punctuation(s: &str) -> bool {
    !s.chars().any(char::is_alphanumeric)
}

pub fn is_numeric(s: &str) -> bool {
    s.chars().any(|c| c.is_ascii_digit())
        && s.chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | '-' | '%'))
}

/// Capitalized in the entity-heuristic sense: first character uppercase.
pub fn is_capitalized(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

/// Transfers the capitalization pattern of `original` onto `replacement`:
/// ALL-CAPS stays all-caps, Title-case becomes title-case, anything else
/// is left as produced.
pub fn match_case(original: &str, replacement: &str) -> String {
    let letters: Vec<char> = original.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() > 1 && letters.iter().all(|c| c.is_uppercase()) {
        return replacement.to_uppercase();
    }
    if is_capitalized(original) {
        let mut chars = replacement.chars();
        return match chars.next() {
            Some(first) => first.to_uppercase().chain(chars).collect(),
            None => String::new(),
        };
    }
    replacement.to_string()
}
