//! The three ways of merging the corpus with the OCR pool, side by side on a
//! four-word corpus and a five-token pool.

use termboost::{FrequencyTable, RfMode, RfTable, WordPool};

fn main() -> termboost::Result<()> {
    let ltd =
        FrequencyTable::from_counts([("the", 800), ("of", 150), ("compiler", 40), ("cat", 10)])?;
    let pool = WordPool::from_counts([("compiler", 3), ("the", 1), ("ssa", 1)])?;

    for mode in [RfMode::Legacy, RfMode::Method1, RfMode::Method1Clamped] {
        let table = RfTable::compute(&ltd, &pool, mode)?;
        println!("mode {mode}");
        println!(
            "  {:<10} {:>6} {:>10} {:>6} {:>8} {:>8} {:>4}",
            "word", "count", "nf", "lf", "rf_raw", "rf", "rank"
        );
        for r in table.rows() {
            println!(
                "  {:<10} {:>6} {:>10.6} {:>6.3} {:>8.4} {:>8.4} {:>4}",
                r.word, r.count_used, r.nf, r.lf, r.rf_raw, r.rf, r.rank
            );
        }
    }

    let table = RfTable::compute(&ltd, &pool, RfMode::Method1Clamped)?;
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    print!("\n{}", String::from_utf8_lossy(&csv));
    Ok(())
}
