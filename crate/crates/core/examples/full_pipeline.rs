//! The whole batch pipeline through the command-line driver, writing every
//! intermediate file into a temporary directory.

use std::fs;
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let work = tempfile::tempdir()?;
    let out = |name: &str| work.path().join(name).display().to_string();
    let input = |name: &str| data.join(name).display().to_string();

    let steps: Vec<Vec<String>> = vec![
        vec![
            "build-rf".into(),
            "--ltd".into(),
            input("ltd.tsv"),
            "--ocr".into(),
            input("ocr.jsonl"),
            "--mode".into(),
            "method1+2".into(),
            "--out".into(),
            out("rf.csv"),
        ],
        vec![
            "fit".into(),
            "--rf".into(),
            out("rf.csv"),
            "--exclude-sub-one".into(),
            "--out".into(),
            out("fit.json"),
        ],
        vec![
            "plot-data".into(),
            "--rf".into(),
            out("rf.csv"),
            "--include-sub-one".into(),
            "--out".into(),
            out("plot.csv"),
        ],
        vec![
            "rescore".into(),
            "--rf".into(),
            out("rf.csv"),
            "--fit".into(),
            out("fit.json"),
            "--nbest".into(),
            input("nbest.jsonl"),
            "--lambda".into(),
            "1.0".into(),
            "--out".into(),
            out("rescored.jsonl"),
        ],
        vec![
            "eval".into(),
            "--ref".into(),
            input("refs.jsonl"),
            "--baseline".into(),
            input("nbest.jsonl"),
            "--rescored".into(),
            out("rescored.jsonl"),
            "--out".into(),
            out("eval.json"),
        ],
    ];
    for args in steps {
        println!("$ termboost {}", args.join(" "));
        let status = termboost::cli::run(std::iter::once("termboost".to_string()).chain(args));
        if status != 0 {
            return Err(format!("step failed with exit status {status}").into());
        }
    }

    println!("\nfit.json:\n{}", fs::read_to_string(out("fit.json"))?);
    println!("eval.json:\n{}", fs::read_to_string(out("eval.json"))?);
    Ok(())
}
