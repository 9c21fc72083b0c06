#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const FIXTURE_S: &str = "the\t800\nof\t150\ncompiler\t40\ncat\t10\n";
pub const FIXTURE_P: &str = concat!(
    "{\"source\":\"lec\",\"timestamp_sec\":0,\"text\":\"The compiler, compiler: SSA\"}\n",
    "{\"source\":\"lec\",\"timestamp_sec\":30,\"text\":\"compiler\"}\n",
);

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data")
}

pub fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

pub fn termboost<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_termboost"))
        .args(args)
        .output()
        .unwrap()
}

pub fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

/// RF table CSV whose rows carry exactly `values`, in rank order.
pub fn synthetic_rf_csv(values: &[f64]) -> String {
    let mut csv = String::from("word,count_used,nf,lf,rf_raw,rf,rank\n");
    for (i, v) in values.iter().enumerate() {
        csv.push_str(&format!("w{i:05},1,0.5,0.5,{v:e},{v:e},{}\n", i + 1));
    }
    csv
}

pub fn path_str(p: &Path) -> String {
    p.to_str().expect("utf-8 path").to_string()
}

/// Runs build-rf, fit, rescore and eval over the shipped sample data into
/// `dir`.
pub fn run_pipeline(dir: &Path) {
    let input = |n: &str| path_str(&data_dir().join(n));
    let out = |n: &str| path_str(&dir.join(n));
    ok(&termboost([
        "build-rf",
        "--ltd",
        &input("ltd.tsv"),
        "--ocr",
        &input("ocr.jsonl"),
        "--mode",
        "method1+2",
        "--out",
        &out("rf.csv"),
    ]));
    ok(&termboost([
        "fit",
        "--rf",
        &out("rf.csv"),
        "--exclude-sub-one",
        "--out",
        &out("fit.json"),
    ]));
    ok(&termboost([
        "rescore",
        "--rf",
        &out("rf.csv"),
        "--fit",
        &out("fit.json"),
        "--nbest",
        &input("nbest.jsonl"),
        "--lambda",
        "1.0",
        "--out",
        &out("rescored.jsonl"),
    ]));
    ok(&termboost([
        "eval",
        "--ref",
        &input("refs.jsonl"),
        "--baseline",
        &input("nbest.jsonl"),
        "--rescored",
        &out("rescored.jsonl"),
        "--out",
        &out("eval.json"),
    ]));
}
