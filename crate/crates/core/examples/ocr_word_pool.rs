//! Tokenize OCR captures into the lecture word pool and read lecture
//! frequencies.

use termboost::ocr_pool::read_ocr_jsonl;
use termboost::{tokenize, WordPool};

const OCR: &str = include_str!("data/ocr.jsonl");

fn main() -> termboost::Result<()> {
    println!("{:?}", tokenize("The compiler, compiler: SSA x86-64!"));

    let docs = read_ocr_jsonl(OCR.as_bytes(), "data/ocr.jsonl")?;
    println!("{} captures from {}", docs.len(), docs[0].source);

    let pool = WordPool::build(&docs)?;
    println!(
        "{} distinct words, {} tokens",
        pool.len(),
        pool.total_tokens()
    );

    let mut top: Vec<_> = pool.iter().collect();
    top.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    for (word, count) in top.into_iter().take(8) {
        println!(
            "{word:>14} {count:>3}  LF = {:.4}",
            pool.lecture_frequency(word)
        );
    }
    Ok(())
}
