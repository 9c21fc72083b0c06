//! Relative-frequency tables.
//!
//! For each pool word `w`:
//!
//! ```text
//! NF(w) = c(w) / Σ c          normal frequency, c from the general corpus
//! LF(w) = n(w) / Σ n          lecture frequency, n from the OCR pool
//! RF(w) = LF(w) / NF(w)
//! ```
//!
//! Three merge modes are supported:
//!
//! * [`RfMode::Legacy`]: words missing from the corpus get count 0, NF is
//!   taken over the full corpus total, and the undefined RF of those words is
//!   replaced by the largest defined RF in the table.
//! * [`RfMode::Method1`]: missing words get the smallest corpus count found
//!   among pool words, and the NF denominator only sums over pool words.
//! * [`RfMode::Method1Clamped`]: as `Method1`, then every RF below 1 is
//!   raised to 1.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::FrequencyTable;
use crate::error::{Error, Result};
use crate::ocr_pool::WordPool;

pub const CSV_HEADER: [&str; 7] = ["word", "count_used", "nf", "lf", "rf_raw", "rf", "rank"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RfMode {
    #[serde(rename = "legacy")]
    Legacy,
    #[serde(rename = "method1")]
    Method1,
    #[default]
    #[serde(rename = "method1+2")]
    Method1Clamped,
}

impl RfMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RfMode::Legacy => "legacy",
            RfMode::Method1 => "method1",
            RfMode::Method1Clamped => "method1+2",
        }
    }

    fn uses_fallback(self) -> bool {
        !matches!(self, RfMode::Legacy)
    }
}

impl fmt::Display for RfMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RfMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "legacy" => Ok(RfMode::Legacy),
            "method1" => Ok(RfMode::Method1),
            "method1+2" => Ok(RfMode::Method1Clamped),
            other => Err(Error::config(format!(
                "unknown mode {other:?}, expected legacy, method1 or method1+2"
            ))),
        }
    }
}

/// Raises RF values below 1 to exactly 1; values at or above 1 pass through.
pub fn clamp_rf(rf_raw: f64) -> f64 {
    if rf_raw >= 1.0 {
        rf_raw
    } else {
        1.0
    }
}

/// Corpus count used for every pool word under `mode`.
pub fn merged_counts(
    ltd: &FrequencyTable,
    pool: &WordPool,
    mode: RfMode,
) -> Result<BTreeMap<String, u64>> {
    if pool.is_empty() {
        return Err(Error::validation("empty RF word pool"));
    }
    let fallback = if mode.uses_fallback() {
        ltd.min_count_within(pool.iter().map(|(w, _)| w))
            .map_err(|_| {
                Error::validation(
                    "no OCR word occurs in the general corpus; the fallback count is undefined",
                )
            })?
    } else {
        0
    };
    Ok(pool
        .iter()
        .map(|(w, _)| (w.to_string(), ltd.get(w).unwrap_or(fallback)))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RfRow {
    pub word: String,
    pub count_used: u64,
    pub nf: f64,
    pub lf: f64,
    /// LF/NF before clamping. In legacy mode, rows with NF = 0 carry the
    /// substituted maximum here as well.
    pub rf_raw: f64,
    pub rf: f64,
    /// 1-based position by `rf` descending, ties by word ascending.
    pub rank: usize,
}

/// Per-word RF records, stored in rank order.
#[derive(Clone, Debug, PartialEq)]
pub struct RfTable {
    rows: Vec<RfRow>,
    mode: RfMode,
    index: HashMap<String, usize>,
}

impl RfTable {
    pub fn compute(ltd: &FrequencyTable, pool: &WordPool, mode: RfMode) -> Result<Self> {
        let counts = merged_counts(ltd, pool, mode)?;
        let denominator: u64 = match mode {
            RfMode::Legacy => ltd.total(),
            RfMode::Method1 | RfMode::Method1Clamped => counts.values().sum(),
        };

        let mut rows: Vec<RfRow> = counts
            .into_iter()
            .map(|(word, count_used)| {
                let nf = count_used as f64 / denominator as f64;
                let lf = pool.lecture_frequency(&word);
                // LF/NF = (n · Σc) / (N · c), divided once so equal ratios give
                // exactly 1.0. NaN marks an undefined RF (legacy rows with NF = 0).
                let rf_raw = if count_used > 0 {
                    let num = u128::from(pool.count(&word)) * u128::from(denominator);
                    let den = u128::from(pool.total_tokens()) * u128::from(count_used);
                    num as f64 / den as f64
                } else {
                    f64::NAN
                };
                RfRow {
                    word,
                    count_used,
                    nf,
                    lf,
                    rf_raw,
                    rf: rf_raw,
                    rank: 0,
                }
            })
            .collect();

        if mode == RfMode::Legacy {
            let max_defined = rows
                .iter()
                .map(|r| r.rf_raw)
                .filter(|rf| !rf.is_nan())
                .fold(None, |acc: Option<f64>, rf| {
                    Some(acc.map_or(rf, |m| m.max(rf)))
                })
                .ok_or_else(|| {
                    Error::validation(
                        "no OCR word occurs in the general corpus; every RF is undefined",
                    )
                })?;
            for row in rows.iter_mut().filter(|r| r.rf_raw.is_nan()) {
                row.rf_raw = max_defined;
                row.rf = max_defined;
            }
        }
        if mode == RfMode::Method1Clamped {
            for row in &mut rows {
                row.rf = clamp_rf(row.rf_raw);
            }
        }
        Ok(Self::ranked(rows, mode))
    }

    /// Sorts rows by `rf` descending (ties by word) and assigns ranks 1..n.
    fn ranked(mut rows: Vec<RfRow>, mode: RfMode) -> Self {
        rows.sort_by(|a, b| b.rf.total_cmp(&a.rf).then_with(|| a.word.cmp(&b.word)));
        for (i, row) in rows.iter_mut().enumerate() {
            row.rank = i + 1;
        }
        Self::indexed(rows, mode)
    }

    fn indexed(rows: Vec<RfRow>, mode: RfMode) -> Self {
        let index = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.word.clone(), i))
            .collect();
        RfTable { rows, mode, index }
    }

    pub fn mode(&self) -> RfMode {
        self.mode
    }

    /// Rows in rank order.
    pub fn rows(&self) -> &[RfRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&RfRow> {
        self.index.get(word).map(|&i| &self.rows[i])
    }

    /// RF used for rescoring. Words outside the table are neutral (1.0).
    pub fn rf_lookup(&self, word: &str) -> f64 {
        self.get(word).map_or(1.0, |r| r.rf)
    }

    /// True when every row has `rf >= 1`, as the OCR score requires.
    pub fn is_clamped(&self) -> bool {
        self.rows.iter().all(|r| r.rf >= 1.0)
    }

    /// Writes the table as CSV in rank order. Floats carry 17 significant
    /// digits so a reload reproduces them exactly.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.word.clone(),
                r.count_used.to_string(),
                fmt_f64(r.nf),
                fmt_f64(r.lf),
                fmt_f64(r.rf_raw),
                fmt_f64(r.rf),
                r.rank.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a table written by [`RfTable::write_csv`].
    ///
    /// The CSV does not record the mode, so it is inferred: any zero NF means
    /// legacy, any `rf < 1` means unclamped method 1, otherwise the table is
    /// treated as clamped (the two method-1 variants coincide when no raw RF
    /// falls below 1).
    pub fn read_csv<R: Read>(input: R, source_name: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(input);
        let header = rdr
            .headers()
            .map_err(|e| Error::parse(source_name, 1, e.to_string()))?;
        if header.iter().ne(CSV_HEADER.iter().copied()) {
            return Err(Error::parse(
                source_name,
                1,
                format!("expected header `{}`", CSV_HEADER.join(",")),
            ));
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.deserialize::<RfRow>().enumerate() {
            let row = rec.map_err(|e| Error::parse(source_name, i + 2, e.to_string()))?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::validation(format!(
                "{source_name}: RF table has no rows"
            )));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.rank != i + 1 {
                return Err(Error::parse(
                    source_name,
                    i + 2,
                    "rows must be in rank order 1..n",
                ));
            }
            if !(r.rf_raw > 0.0 && r.rf > 0.0) || !r.rf_raw.is_finite() || !r.rf.is_finite() {
                return Err(Error::parse(
                    source_name,
                    i + 2,
                    "rf_raw and rf must be positive and finite",
                ));
            }
        }
        let mode = if rows.iter().any(|r| r.nf == 0.0) {
            RfMode::Legacy
        } else if rows.iter().any(|r| r.rf < 1.0) {
            RfMode::Method1
        } else {
            RfMode::Method1Clamped
        };
        let table = Self::indexed(rows, mode);
        if table.index.len() != table.rows.len() {
            return Err(Error::validation(format!(
                "{source_name}: duplicate word in RF table"
            )));
        }
        Ok(table)
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::validation(format!("csv: {other:?}")),
    }
}

/// 17 significant digits in scientific notation.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
