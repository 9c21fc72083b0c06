//! Word error rate and baseline-versus-rescored comparison.

use std::collections::{BTreeMap, HashMap};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ocr_pool::tokenize;
use crate::rescore::NBestList;

/// Token-level Levenshtein distance with unit costs.
pub fn edit_distance<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> usize {
    let mut prev: Vec<usize> = (0..=hypothesis.len()).collect();
    let mut curr = vec![0; hypothesis.len() + 1];
    for (i, r) in reference.iter().enumerate() {
        curr[0] = i + 1;
        for (j, h) in hypothesis.iter().enumerate() {
            let sub = prev[j] + usize::from(r != h);
            curr[j + 1] = sub.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[hypothesis.len()]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WerCounts {
    pub edits: usize,
    pub ref_words: usize,
}

impl WerCounts {
    pub fn wer(&self) -> f64 {
        self.edits as f64 / self.ref_words as f64
    }
}

pub fn wer_counts(reference: &str, hypothesis: &str) -> Result<WerCounts> {
    let r = tokenize(reference);
    if r.is_empty() {
        return Err(Error::validation("reference has no tokens"));
    }
    let h = tokenize(hypothesis);
    Ok(WerCounts {
        edits: edit_distance(&r, &h),
        ref_words: r.len(),
    })
}

/// Edit distance over normalized tokens divided by the reference length.
pub fn word_error_rate(reference: &str, hypothesis: &str) -> Result<f64> {
    wer_counts(reference, hypothesis).map(|c| c.wer())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UtteranceWer {
    pub utterance_id: String,
    pub wer_baseline: f64,
    pub wer_rescored: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub utterances: Vec<UtteranceWer>,
    /// Σ edits / Σ reference words over all utterances.
    pub aggregate_baseline: f64,
    pub aggregate_rescored: f64,
    /// `aggregate_rescored - aggregate_baseline`; negative is an improvement.
    pub delta: f64,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Deserialize)]
struct ReferenceLine {
    utterance_id: String,
    text: String,
}

/// Reads `{"utterance_id", "text"}` JSON Lines.
pub fn read_references<R: BufRead>(
    reader: R,
    source_name: &str,
) -> Result<BTreeMap<String, String>> {
    let mut refs = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ReferenceLine = serde_json::from_str(&line)
            .map_err(|e| Error::parse(source_name, idx + 1, e.to_string()))?;
        if refs.insert(rec.utterance_id.clone(), rec.text).is_some() {
            return Err(Error::parse(
                source_name,
                idx + 1,
                format!("duplicate utterance_id {:?}", rec.utterance_id),
            ));
        }
    }
    Ok(refs)
}

/// Compares the top-1 hypotheses of two runs against references.
///
/// Utterances are reported in baseline order. Both runs must cover the same
/// utterances.
pub fn compare_runs(
    refs: &BTreeMap<String, String>,
    baseline: &[NBestList],
    rescored: &[NBestList],
) -> Result<EvalReport> {
    let rescored_by_id: HashMap<&str, &NBestList> = rescored
        .iter()
        .map(|l| (l.utterance_id.as_str(), l))
        .collect();
    if rescored_by_id.len() != rescored.len() {
        return Err(Error::validation("rescored run repeats an utterance_id"));
    }
    if baseline.len() != rescored.len() {
        return Err(Error::validation(format!(
            "baseline has {} utterances but rescored has {}",
            baseline.len(),
            rescored.len()
        )));
    }

    let mut utterances = Vec::with_capacity(baseline.len());
    let (mut base_edits, mut resc_edits, mut ref_words) = (0, 0, 0);
    for b in baseline {
        let id = b.utterance_id.as_str();
        let reference = refs
            .get(id)
            .ok_or_else(|| Error::validation(format!("no reference for utterance {id:?}")))?;
        let r = rescored_by_id.get(id).ok_or_else(|| {
            Error::validation(format!("utterance {id:?} missing from rescored run"))
        })?;
        let wb = wer_counts(reference, &b.top().text)
            .map_err(|e| Error::validation(format!("utterance {id:?}: {e}")))?;
        let wr = wer_counts(reference, &r.top().text)?;
        base_edits += wb.edits;
        resc_edits += wr.edits;
        ref_words += wb.ref_words;
        utterances.push(UtteranceWer {
            utterance_id: id.to_string(),
            wer_baseline: wb.wer(),
            wer_rescored: wr.wer(),
        });
    }
    if ref_words == 0 {
        return Err(Error::validation("no utterances to evaluate"));
    }
    let aggregate_baseline = base_edits as f64 / ref_words as f64;
    let aggregate_rescored = resc_edits as f64 / ref_words as f64;
    Ok(EvalReport {
        utterances,
        aggregate_baseline,
        aggregate_rescored,
        delta: aggregate_rescored - aggregate_baseline,
    })
}
