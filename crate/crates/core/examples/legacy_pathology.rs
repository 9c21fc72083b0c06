//! Why zero counts plus max-RF substitution flatten the top of the rank/RF
//! curve, and how the min-count fallback avoids it.

use termboost::{plot_points, FrequencyTable, RfMode, RfTable, WordPool};

fn main() -> termboost::Result<()> {
    // 40 general words with Zipf-like counts, all of which appear in the pool
    let general: Vec<(String, u64)> = (1..=40)
        .map(|i| (format!("word{i:02}"), 100_000 / i))
        .collect();
    let ltd = FrequencyTable::from_counts(general.iter().map(|(w, c)| (w.as_str(), *c)))?;

    // 10 lecture-only terms (20% of the pool), each seen a different number of times
    let mut pool_counts: Vec<(String, u64)> = general.iter().map(|(w, _)| (w.clone(), 2)).collect();
    pool_counts.extend((1..=10).map(|i| (format!("term{i:02}"), i)));
    let pool = WordPool::from_counts(pool_counts)?;

    for mode in [RfMode::Legacy, RfMode::Method1] {
        let table = RfTable::compute(&ltd, &pool, mode)?;
        let max = table.rows()[0].rf;
        let flat = table.rows().iter().filter(|r| r.rf == max).count();
        println!("{mode}: {flat} rows share the maximum RF {max:.3}");
        for (x, y) in plot_points(&table, false).iter().take(12) {
            println!("  log10 rank {x:.3}  log10 rf {y:.3}");
        }
    }
    Ok(())
}
