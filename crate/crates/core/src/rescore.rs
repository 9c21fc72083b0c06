//! OCR-based rescoring of n-best hypothesis lists.
//!
//! A hypothesis with tokens `w_1..w_m` gets
//!
//! ```text
//! score_ocr = (1/m) Σ (1 - RF(w_i)^(1/k))
//! score_new = score_old + λ · score_ocr
//! ```
//!
//! where `k < 0` is the fitted power-law slope. With every RF at least 1,
//! each term lies in `[0, 1)`, and words at the neutral RF of 1 add nothing.

use std::cmp::Ordering;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ocr_pool::tokenize;
use crate::rf_model::RfTable;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub text: String,
    /// Decoder score, used as an opaque additive term.
    pub score_old: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score_ocr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score_new: Option<f64>,
}

impl Hypothesis {
    pub fn new(text: impl Into<String>, score_old: f64) -> Self {
        Hypothesis {
            text: text.into(),
            score_old,
            score_ocr: None,
            score_new: None,
        }
    }

    /// The score a list is ordered by: `score_new` once rescored, else
    /// `score_old`.
    pub fn effective_score(&self) -> f64 {
        self.score_new.unwrap_or(self.score_old)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NBestList {
    pub utterance_id: String,
    pub hypotheses: Vec<Hypothesis>,
}

impl NBestList {
    pub fn new(utterance_id: impl Into<String>, hypotheses: Vec<Hypothesis>) -> Result<Self> {
        let list = NBestList {
            utterance_id: utterance_id.into(),
            hypotheses,
        };
        list.validate()?;
        Ok(list)
    }

    fn validate(&self) -> Result<()> {
        if self.utterance_id.is_empty() {
            return Err(Error::validation("n-best list has an empty utterance_id"));
        }
        if self.hypotheses.is_empty() {
            return Err(Error::validation(format!(
                "n-best list {:?} has no hypotheses",
                self.utterance_id
            )));
        }
        if let Some(i) = self
            .hypotheses
            .iter()
            .position(|h| !h.score_old.is_finite())
        {
            return Err(Error::validation(format!(
                "utterance {:?} hypothesis {i}: score_old is not finite",
                self.utterance_id
            )));
        }
        Ok(())
    }

    /// Best hypothesis by effective score; the earliest wins ties.
    pub fn top(&self) -> &Hypothesis {
        self.hypotheses
            .iter()
            .reduce(|best, h| {
                if h.effective_score() > best.effective_score() {
                    h
                } else {
                    best
                }
            })
            .expect("n-best list is non-empty")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RescoreConfig {
    lambda_ocr: f64,
    k: f64,
}

impl RescoreConfig {
    pub const DEFAULT_LAMBDA: f64 = 1.0;

    pub fn new(k: f64, lambda_ocr: f64) -> Result<Self> {
        check_k(k)?;
        if lambda_ocr < 0.0 || !lambda_ocr.is_finite() {
            return Err(Error::config(format!(
                "lambda must be a non-negative number, got {lambda_ocr}"
            )));
        }
        Ok(RescoreConfig { lambda_ocr, k })
    }

    pub fn with_default_lambda(k: f64) -> Result<Self> {
        Self::new(k, Self::DEFAULT_LAMBDA)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn lambda_ocr(&self) -> f64 {
        self.lambda_ocr
    }
}

fn check_k(k: f64) -> Result<()> {
    if k < 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!(
            "k must be a negative slope, got {k}"
        )))
    }
}

fn check_clamped(rf: &RfTable) -> Result<()> {
    if rf.is_clamped() {
        Ok(())
    } else {
        Err(Error::config(format!(
            "OCR scoring needs RF >= 1 everywhere; got a {} table with values below 1",
            rf.mode()
        )))
    }
}

/// Mean of `1 - RF^(1/k)` over the normalized tokens of `text`.
pub fn score_ocr(text: &str, rf: &RfTable, k: f64) -> Result<f64> {
    check_k(k)?;
    check_clamped(rf)?;
    score_tokens(&tokenize(text), rf, k)
        .ok_or_else(|| Error::validation(format!("hypothesis {text:?} has no tokens")))
}

fn score_tokens(tokens: &[String], rf: &RfTable, k: f64) -> Option<f64> {
    if tokens.is_empty() {
        return None;
    }
    let inv_k = 1.0 / k;
    let sum: f64 = tokens
        .iter()
        .map(|t| 1.0 - rf.rf_lookup(t).powf(inv_k))
        .sum();
    Some(sum / tokens.len() as f64)
}

/// `score_old + λ · score_ocr`.
pub fn merge_scores(score_old: f64, score_ocr: f64, lambda_ocr: f64) -> f64 {
    let bonus = lambda_ocr * score_ocr;
    if bonus == 0.0 {
        // adding +0.0 would turn a -0.0 score into +0.0
        score_old
    } else {
        score_old + bonus
    }
}

/// Scores every hypothesis and stably sorts the list by `score_new`
/// descending.
pub fn rescore_nbest(list: &NBestList, rf: &RfTable, config: &RescoreConfig) -> Result<NBestList> {
    list.validate()?;
    check_clamped(rf)?;
    let mut hypotheses = Vec::with_capacity(list.hypotheses.len());
    for (i, h) in list.hypotheses.iter().enumerate() {
        let ocr = score_tokens(&tokenize(&h.text), rf, config.k).ok_or_else(|| {
            Error::validation(format!(
                "utterance {:?} hypothesis {i}: text {:?} has no tokens",
                list.utterance_id, h.text
            ))
        })?;
        hypotheses.push(Hypothesis {
            text: h.text.clone(),
            score_old: h.score_old,
            score_ocr: Some(ocr),
            score_new: Some(merge_scores(h.score_old, ocr, config.lambda_ocr)),
        });
    }
    hypotheses.sort_by(|a, b| desc(a.effective_score(), b.effective_score()));
    Ok(NBestList {
        utterance_id: list.utterance_id.clone(),
        hypotheses,
    })
}

fn desc(a: f64, b: f64) -> Ordering {
    b.total_cmp(&a)
}

/// Reads n-best lists from JSON Lines, one utterance per line.
pub fn read_nbest_jsonl<R: BufRead>(reader: R, source_name: &str) -> Result<Vec<NBestList>> {
    let mut lists = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let list: NBestList = serde_json::from_str(&line)
            .map_err(|e| Error::parse(source_name, idx + 1, e.to_string()))?;
        list.validate()
            .map_err(|e| Error::parse(source_name, idx + 1, e.to_string()))?;
        lists.push(list);
    }
    Ok(lists)
}

pub fn write_nbest_jsonl<W: Write>(lists: &[NBestList], mut out: W) -> Result<()> {
    for list in lists {
        serde_json::to_writer(&mut out, list).map_err(|e| Error::Io(e.into()))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::FrequencyTable;
    use crate::ocr_pool::WordPool;
    use crate::rf_model::RfMode;

    fn clamped_fixture() -> RfTable {
        let ltd =
            FrequencyTable::from_counts([("the", 800), ("of", 150), ("compiler", 40), ("cat", 10)])
                .unwrap();
        let pool = WordPool::from_counts([("compiler", 3), ("the", 1), ("ssa", 1)]).unwrap();
        RfTable::compute(&ltd, &pool, RfMode::Method1Clamped).unwrap()
    }

    fn single_word_table(word: &str, rf: f64) -> RfTable {
        let csv = format!("word,count_used,nf,lf,rf_raw,rf,rank\n{word},1,0.25,1,{rf},{rf},1\n");
        RfTable::read_csv(csv.as_bytes(), "t").unwrap()
    }

    #[test]
    fn fixture_score() {
        let s = score_ocr("compiler the", &clamped_fixture(), -2.0).unwrap();
        let expected = 0.5 * ((1.0 - 13.2f64.powf(-0.5)) + 0.0);
        assert!((s - expected).abs() < 1e-12);
        assert!((s - 0.362379).abs() < 1e-6);
    }

    #[test]
    fn neutral_tokens_score_zero() {
        let t = clamped_fixture();
        assert_eq!(score_ocr("the unseen THE", &t, -0.7).unwrap(), 0.0);
    }

    #[test]
    fn single_token_score() {
        let s = score_ocr("gc", &single_word_table("gc", 4.0), -1.0).unwrap();
        assert_eq!(s, 0.75);
    }

    #[test]
    fn score_errors() {
        let t = clamped_fixture();
        assert!(matches!(
            score_ocr("...", &t, -1.0),
            Err(Error::Validation(_))
        ));
        assert!(matches!(score_ocr("the", &t, 0.0), Err(Error::Config(_))));
        assert!(matches!(score_ocr("the", &t, 0.5), Err(Error::Config(_))));

        let ltd = FrequencyTable::from_counts([("the", 800), ("compiler", 40)]).unwrap();
        let pool = WordPool::from_counts([("compiler", 3), ("the", 1)]).unwrap();
        let unclamped = RfTable::compute(&ltd, &pool, RfMode::Method1).unwrap();
        assert!(matches!(
            score_ocr("the", &unclamped, -1.0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn merge_identities() {
        assert!((merge_scores(-4.2, 0.362379, 1.0) - -3.837621).abs() < 1e-12);
        assert_eq!(merge_scores(0.0, 0.0, 1.0), 0.0);
        for s in [-0.0, 0.0, -12.5, 3.25, f64::MIN_POSITIVE] {
            assert_eq!(merge_scores(s, 0.9, 0.0).to_bits(), s.to_bits());
        }
    }

    #[test]
    fn config_validation() {
        assert!(RescoreConfig::new(-1.0, 0.0).is_ok());
        assert!(RescoreConfig::new(-1.0, -0.1).is_err());
        assert!(RescoreConfig::new(-1.0, f64::NAN).is_err());
        assert!(RescoreConfig::new(f64::NEG_INFINITY, 1.0).is_err());
        assert_eq!(
            RescoreConfig::with_default_lambda(-2.0)
                .unwrap()
                .lambda_ocr(),
            1.0
        );
    }

    #[test]
    fn jargon_hypothesis_wins_tie() {
        let list = NBestList::new(
            "u1",
            vec![
                Hypothesis::new("the cat", -3.0),
                Hypothesis::new("the compiler", -3.0),
            ],
        )
        .unwrap();
        let cfg = RescoreConfig::new(-2.0, 1.0).unwrap();
        let out = rescore_nbest(&list, &clamped_fixture(), &cfg).unwrap();
        assert_eq!(out.hypotheses[0].text, "the compiler");
        assert!((out.hypotheses[0].score_ocr.unwrap() - 0.362379).abs() < 1e-6);
        assert_eq!(out.hypotheses[1].score_ocr, Some(0.0));
    }

    #[test]
    fn zero_lambda_keeps_old_order() {
        let list = NBestList::new(
            "u1",
            vec![
                Hypothesis::new("the cat", -1.0),
                Hypothesis::new("the compiler", -2.0),
                Hypothesis::new("ssa", -2.0),
            ],
        )
        .unwrap();
        let out = rescore_nbest(
            &list,
            &clamped_fixture(),
            &RescoreConfig::new(-2.0, 0.0).unwrap(),
        )
        .unwrap();
        let texts: Vec<_> = out.hypotheses.iter().map(|h| h.text.as_str()).collect();
        assert_eq!(texts, ["the cat", "the compiler", "ssa"]);
        for h in &out.hypotheses {
            assert_eq!(h.score_new.unwrap().to_bits(), h.score_old.to_bits());
        }
    }

    #[test]
    fn single_hypothesis_list() {
        let list = NBestList::new("u", vec![Hypothesis::new("compiler", 1.5)]).unwrap();
        let out = rescore_nbest(
            &list,
            &clamped_fixture(),
            &RescoreConfig::new(-1.0, 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(out.hypotheses.len(), 1);
        assert!(out.hypotheses[0].score_ocr.is_some() && out.hypotheses[0].score_new.is_some());
    }

    #[test]
    fn empty_hypothesis_names_utterance_and_index() {
        let list = NBestList::new(
            "utt-7",
            vec![Hypothesis::new("ok", 0.0), Hypothesis::new(" !! ", 0.0)],
        )
        .unwrap();
        let err = rescore_nbest(
            &list,
            &clamped_fixture(),
            &RescoreConfig::new(-1.0, 1.0).unwrap(),
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("utt-7") && msg.contains("hypothesis 1"),
            "{msg}"
        );
    }

    #[test]
    fn list_validation() {
        assert!(NBestList::new("", vec![Hypothesis::new("a", 0.0)]).is_err());
        assert!(NBestList::new("u", vec![]).is_err());
    }

    #[test]
    fn jsonl_round_trip() {
        let input = "{\"utterance_id\":\"u1\",\"hypotheses\":[{\"text\":\"the cat\",\"score_old\":-1.5}]}\n";
        let lists = read_nbest_jsonl(input.as_bytes(), "in").unwrap();
        let mut buf = Vec::new();
        write_nbest_jsonl(&lists, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), input);

        let rescored = rescore_nbest(
            &lists[0],
            &clamped_fixture(),
            &RescoreConfig::new(-1.0, 1.0).unwrap(),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_nbest_jsonl(&[rescored], &mut buf).unwrap();
        let line = String::from_utf8(buf).unwrap();
        assert!(
            line.contains("\"score_ocr\":0.0") && line.contains("\"score_new\":-1.5"),
            "{line}"
        );

        assert!(read_nbest_jsonl(
            "{\"utterance_id\":\"u\",\"hypotheses\":[]}\n".as_bytes(),
            "in"
        )
        .is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            // bounded so that rf^(1/k) stays well above f64 epsilon
            fn score_is_monotone_in_rf(a in 1.0f64..1e4, b in 1.0f64..1e4, k in -5.0f64..-0.5) {
                prop_assume!(b > a * (1.0 + 1e-4));
                let sa = score_ocr("w", &single_word_table("w", a), k).unwrap();
                let sb = score_ocr("w", &single_word_table("w", b), k).unwrap();
                prop_assert!(sa < sb);
            }

            #[test]
            fn equal_old_scores_order_ignores_lambda(
                texts in prop::collection::vec("(the|compiler|ssa|cat|of) (the|compiler|ssa|cat)", 2..5),
                lambda in 0.01f64..50.0,
            ) {
                let table = clamped_fixture();
                let list = NBestList::new("u", texts.iter().map(|t| Hypothesis::new(t.clone(), -2.0)).collect()).unwrap();
                let a = rescore_nbest(&list, &table, &RescoreConfig::new(-1.5, 1.0).unwrap()).unwrap();
                let b = rescore_nbest(&list, &table, &RescoreConfig::new(-1.5, lambda).unwrap()).unwrap();
                let ta: Vec<_> = a.hypotheses.iter().map(|h| &h.text).collect();
                let tb: Vec<_> = b.hypotheses.iter().map(|h| &h.text).collect();
                prop_assert_eq!(ta, tb);
                let again = rescore_nbest(&list, &table, &RescoreConfig::new(-1.5, 1.0).unwrap()).unwrap();
                prop_assert_eq!(a, again);
            }
        }
    }
}
