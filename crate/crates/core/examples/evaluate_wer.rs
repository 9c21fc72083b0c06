//! Word error rate and a before/after comparison of two runs.

use termboost::eval::read_references;
use termboost::rescore::read_nbest_jsonl;
use termboost::{compare_runs, word_error_rate};

fn main() -> termboost::Result<()> {
    let r = "the compiler builds ssa form";
    println!("WER(identical) = {}", word_error_rate(r, r)?);
    println!(
        "WER(one substitution) = {}",
        word_error_rate(r, "the compiler build ssa form")?
    );
    println!(
        "WER(casing and punctuation only) = {}",
        word_error_rate(r, "The Compiler builds SSA form.")?
    );

    let refs = read_references(include_str!("data/refs.jsonl").as_bytes(), "refs.jsonl")?;
    let baseline = read_nbest_jsonl(include_str!("data/nbest.jsonl").as_bytes(), "nbest.jsonl")?;

    // pretend a rescorer fixed the first utterance
    let mut rescored = baseline.clone();
    let first = &mut rescored[0].hypotheses;
    first[0].score_new = Some(first[0].score_old);
    first[1].score_new = Some(first[0].score_old + 0.5);

    let report = compare_runs(&refs, &baseline, &rescored)?;
    println!("{}", report.to_json());
    Ok(())
}
