//! Load a `word<TAB>count` unigram table and query it.

use termboost::FrequencyTable;

const LTD: &str = include_str!("data/ltd.tsv");

fn main() -> termboost::Result<()> {
    let table = FrequencyTable::load(LTD.as_bytes(), "data/ltd.tsv")?;
    println!(
        "{} words, {} tokens, min count {}",
        table.len(),
        table.total(),
        table.min_count()
    );

    for word in ["the", "compiler", "ssa"] {
        match table.get(word) {
            Some(c) => println!("{word:>10}: {c}"),
            None => println!("{word:>10}: not in corpus"),
        }
    }

    // smallest count among a few lecture words that the corpus knows
    let lecture = ["compiler", "register", "ssa", "phi"];
    let floor = table.min_count_within(lecture)?;
    println!("fallback count for unseen lecture words: {floor}");
    println!(
        "lookup ssa with fallback: {}",
        table.lookup_count("ssa", floor)
    );

    match FrequencyTable::load("compiler forty\n".as_bytes(), "bad.tsv") {
        Err(e) => println!("malformed input is rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
