//! OCR text dumps and the word pool built from them.
//!
//! Every token that reaches a frequency table, a pool or a hypothesis lookup
//! goes through [`normalize_token`], so the general corpus and the lecture
//! text are compared in one shared form.

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// NFC, lowercase, then strip leading and trailing non-alphanumeric
/// characters. Internal punctuation (hyphens, apostrophes, ...) is kept.
pub fn normalize_token(raw: &str) -> Option<String> {
    // lowercasing can emit decomposed sequences, so compose again after it
    let lowered: String = raw.nfc().collect::<String>().to_lowercase().nfc().collect();
    let trimmed = lowered.trim_matches(|c: char| !c.is_alphanumeric());
    if trimmed.is_empty() {
        None
    } else {
        Some(trimmed.to_string())
    }
}

pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(normalize_token)
        .collect()
}

/// One OCR capture of a lecture frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OcrDocument {
    pub source: String,
    pub timestamp_sec: f64,
    pub text: String,
}

impl OcrDocument {
    pub fn new(
        source: impl Into<String>,
        timestamp_sec: f64,
        text: impl Into<String>,
    ) -> Result<Self> {
        let doc = OcrDocument {
            source: source.into(),
            timestamp_sec,
            text: text.into(),
        };
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<()> {
        if self.source.is_empty() {
            return Err(Error::validation("OCR document has an empty source"));
        }
        if self.timestamp_sec < 0.0 || !self.timestamp_sec.is_finite() {
            return Err(Error::validation(format!(
                "OCR document from {:?} has invalid timestamp {}",
                self.source, self.timestamp_sec
            )));
        }
        Ok(())
    }
}

/// Reads a JSON Lines OCR dump, one capture object per line. Blank lines are
/// skipped.
pub fn read_ocr_jsonl<R: BufRead>(reader: R, source_name: &str) -> Result<Vec<OcrDocument>> {
    let mut docs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: OcrDocument = serde_json::from_str(&line)
            .map_err(|e| Error::parse(source_name, idx + 1, e.to_string()))?;
        doc.validate()
            .map_err(|e| Error::parse(source_name, idx + 1, e.to_string()))?;
        docs.push(doc);
    }
    Ok(docs)
}

/// Plain-text fallback: the whole text is a single capture at time 0.
pub fn plain_text_document(source: &str, text: String) -> Result<OcrDocument> {
    OcrDocument::new(source, 0.0, text)
}

/// Multiset of normalized OCR tokens.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordPool {
    counts: BTreeMap<String, u64>,
    total_tokens: u64,
}

impl WordPool {
    /// Aggregates token occurrences over all documents. Repeated captures of
    /// the same slide are counted every time they appear.
    pub fn build<'a, I>(docs: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a OcrDocument>,
    {
        let mut pool = WordPool::default();
        for doc in docs {
            for token in tokenize(&doc.text) {
                *pool.counts.entry(token).or_insert(0) += 1;
                pool.total_tokens += 1;
            }
        }
        if pool.total_tokens == 0 {
            return Err(Error::validation("empty RF word pool"));
        }
        Ok(pool)
    }

    /// Builds a pool directly from word counts. Words are normalized and
    /// merged; zero counts are rejected.
    pub fn from_counts<I, S>(counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut pool = WordPool::default();
        for (word, count) in counts {
            let word = word.as_ref();
            let norm = normalize_token(word).ok_or_else(|| {
                Error::validation(format!("pool word {word:?} normalizes to nothing"))
            })?;
            if count == 0 {
                return Err(Error::validation(format!("pool word {norm:?} has count 0")));
            }
            *pool.counts.entry(norm).or_insert(0) += count;
            pool.total_tokens += count;
        }
        if pool.total_tokens == 0 {
            return Err(Error::validation("empty RF word pool"));
        }
        Ok(pool)
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
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
        self.counts.contains_key(word)
    }

    /// Words in ascending order with their counts.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(w, &c)| (w.as_str(), c))
    }

    /// Lecture frequency: occurrences of `word` over all pool tokens.
    pub fn lecture_frequency(&self, word: &str) -> f64 {
        self.count(word) as f64 / self.total_tokens as f64
    }
}
