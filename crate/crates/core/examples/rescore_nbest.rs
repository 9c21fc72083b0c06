//! Add the OCR score to decoder hypotheses and re-rank them.

use termboost::{merge_scores, rescore_nbest, score_ocr, FrequencyTable, Hypothesis, NBestList};
use termboost::{RescoreConfig, RfMode, RfTable, WordPool};

fn main() -> termboost::Result<()> {
    let ltd =
        FrequencyTable::from_counts([("the", 800), ("of", 150), ("compiler", 40), ("cat", 10)])?;
    let pool = WordPool::from_counts([("compiler", 3), ("the", 1), ("ssa", 1)])?;
    let rf = RfTable::compute(&ltd, &pool, RfMode::Method1Clamped)?;

    let k = -2.0;
    let s = score_ocr("compiler the", &rf, k)?;
    println!("score_ocr(\"compiler the\") = {s:.6}");
    println!(
        "merged with -4.2 at lambda 1: {:.6}",
        merge_scores(-4.2, s, 1.0)
    );

    let list = NBestList::new(
        "utt-1",
        vec![
            Hypothesis::new("the cat", -3.0),
            Hypothesis::new("the compiler", -3.0),
        ],
    )?;
    for lambda in [0.0, 1.0] {
        let out = rescore_nbest(&list, &rf, &RescoreConfig::new(k, lambda)?)?;
        println!("lambda {lambda}:");
        for h in &out.hypotheses {
            println!(
                "  {:<14} old {:>5.2}  ocr {:.5}  new {:.5}",
                h.text,
                h.score_old,
                h.score_ocr.unwrap_or_default(),
                h.score_new.unwrap_or_default()
            );
        }
    }

    if let Err(e) = RescoreConfig::new(0.3, 1.0) {
        println!("positive slopes are refused: {e}");
    }
    Ok(())
}
