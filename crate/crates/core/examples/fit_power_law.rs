//! Fit the rank/RF power law, with and without the rows whose raw RF is
//! below 1.

use termboost::ocr_pool::read_ocr_jsonl;
use termboost::power_law::fit_points;
use termboost::{fit_power_law, FrequencyTable, RfMode, RfTable, WordPool};

fn main() -> termboost::Result<()> {
    // noise-free data is recovered exactly
    let points: Vec<(f64, f64)> = (1..=100)
        .map(|r| {
            let r = r as f64;
            (r.log10(), (100.0 * r.powf(-0.8)).log10())
        })
        .collect();
    let exact = fit_points(&points)?;
    println!(
        "synthetic: k = {:.12}, intercept = {:.12}, dof = {}",
        exact.k, exact.intercept, exact.dof
    );

    let ltd = FrequencyTable::load(include_str!("data/ltd.tsv").as_bytes(), "ltd.tsv")?;
    let docs = read_ocr_jsonl(include_str!("data/ocr.jsonl").as_bytes(), "ocr.jsonl")?;
    let pool = WordPool::build(&docs)?;
    let table = RfTable::compute(&ltd, &pool, RfMode::Method1Clamped)?;

    let all = fit_power_law(&table, false)?;
    let above_one = fit_power_law(&table, true)?;
    println!(
        "all rows:     k = {:.4}, rse = {:.4}, dof = {}",
        all.k, all.rse, all.dof
    );
    println!(
        "rf_raw >= 1:  k = {:.4}, rse = {:.4}, dof = {}",
        above_one.k, above_one.rse, above_one.dof
    );
    println!("{}", above_one.to_json());
    Ok(())
}
