//! Unigram frequency tables for a large general-domain text corpus.
//!
//! The on-disk format is the usual `word<TAB>count` listing (one word per
//! line, no header), as distributed for web-scale unigram counts.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::ocr_pool::normalize_token;

/// Word counts of a large-text dataset. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyTable {
    entries: BTreeMap<String, u64>,
    total: u64,
    min_count: u64,
}

impl FrequencyTable {
    /// Builds a table from `(word, count)` pairs. Words are normalized; two
    /// words that normalize to the same token are an error rather than merged.
    pub fn from_counts<I, S>(counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut entries = BTreeMap::new();
        for (word, count) in counts {
            let word = word.as_ref();
            let norm = normalize_token(word)
                .ok_or_else(|| Error::validation(format!("word {word:?} normalizes to nothing")))?;
            if count == 0 {
                return Err(Error::validation(format!("word {norm:?} has count 0")));
            }
            insert_unique(&mut entries, norm, count)?;
        }
        Self::from_entries(entries)
    }

    fn from_entries(entries: BTreeMap<String, u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::validation("frequency table is empty"));
        }
        let total = entries
            .values()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::validation("total count overflows u64"))?;
        let min_count = entries.values().copied().min().unwrap_or(1);
        Ok(FrequencyTable {
            entries,
            total,
            min_count,
        })
    }

    /// Parses `word<TAB>count` lines. Blank lines are ignored; line numbers
    /// in errors are 1-based.
    pub fn load<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let (word, count) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(source_name, lineno, "expected `word<TAB>count`"))?;
            let count: u64 = count.trim().parse().map_err(|_| {
                Error::parse(
                    source_name,
                    lineno,
                    format!("count {count:?} is not a positive integer"),
                )
            })?;
            if count == 0 {
                return Err(Error::parse(
                    source_name,
                    lineno,
                    "count must be at least 1",
                ));
            }
            let norm = normalize_token(word).ok_or_else(|| {
                Error::parse(
                    source_name,
                    lineno,
                    format!("word {word:?} normalizes to nothing"),
                )
            })?;
            insert_unique(&mut entries, norm, count)
                .map_err(|e| Error::validation(format!("{source_name}:{lineno}: {e}")))?;
        }
        Self::from_entries(entries)
    }

    /// Writes the table in load format, sorted by count descending then word.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut rows: Vec<_> = self.entries.iter().collect();
        rows.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
        for (word, count) in rows {
            writeln!(out, "{word}\t{count}")?;
        }
        Ok(())
    }

    pub fn get(&self, word: &str) -> Option<u64> {
        self.entries.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    /// Count of `word`, or `fallback` when the corpus does not contain it.
    ///
    /// Panics if `fallback` is zero.
    pub fn lookup_count(&self, word: &str, fallback: u64) -> u64 {
        assert!(fallback >= 1, "fallback count must be at least 1");
        self.get(word).unwrap_or(fallback)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Minimum count over the whole table.
    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    /// Minimum count over the words of `restrict_to` that are present in the
    /// table; words not in the table are ignored.
    pub fn min_count_within<'a, I>(&self, restrict_to: I) -> Result<u64>
    where
        I: IntoIterator<Item = &'a str>,
    {
        restrict_to
            .into_iter()
            .filter_map(|w| self.get(w))
            .min()
            .ok_or_else(|| {
                Error::validation("no word of the restriction set is in the frequency table")
            })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(w, &c)| (w.as_str(), c))
    }
}

fn insert_unique(entries: &mut BTreeMap<String, u64>, word: String, count: u64) -> Result<()> {
    match entries.entry(word) {
        Entry::Occupied(e) => Err(Error::validation(format!("duplicate word {:?}", e.key()))),
        Entry::Vacant(e) => {
            e.insert(count);
            Ok(())
        }
    }
}
