//! Batch command-line driver over the library.
//!
//! Exit status: 0 on success, 1 on I/O failure, 2 on invalid input or
//! configuration. Errors go to stderr as a single `error: ...` line.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::corpus::FrequencyTable;
use crate::error::{Error, Result};
use crate::eval::{compare_runs, read_references};
use crate::ocr_pool::{plain_text_document, read_ocr_jsonl, OcrDocument, WordPool};
use crate::power_law::{fit_power_law, plot_points, write_plot_csv, PowerLawFit};
use crate::rescore::{read_nbest_jsonl, rescore_nbest, write_nbest_jsonl, RescoreConfig};
use crate::rf_model::{RfMode, RfTable};

#[derive(Debug, Parser)]
#[command(
    name = "termboost",
    version,
    about = "OCR relative-frequency statistics and n-best rescoring"
)]
pub struct Cli {
    /// JSON file with default settings; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an RF table from a general corpus and OCR dumps.
    BuildRf {
        #[arg(long, value_name = "PATH")]
        ltd: Option<PathBuf>,
        /// OCR dump; `.jsonl`/`.ndjson`/`.json` files are JSON Lines, anything else is plain text.
        #[arg(long, value_name = "PATH")]
        ocr: Vec<PathBuf>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<RfMode>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Fit the power law to an RF table and write the fit report.
    Fit {
        #[arg(long, value_name = "PATH")]
        rf: Option<PathBuf>,
        #[command(flatten)]
        filter: SubOneFilter,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Rescore n-best lists with the OCR score.
    Rescore {
        #[arg(long, value_name = "PATH")]
        rf: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        fit: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        nbest: Option<PathBuf>,
        #[arg(long = "lambda", value_name = "FLOAT", allow_negative_numbers = true)]
        lambda_ocr: Option<f64>,
        /// Override the fitted slope.
        #[arg(long, value_name = "FLOAT", allow_negative_numbers = true)]
        k: Option<f64>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Compare top-1 WER of a baseline and a rescored run.
    Eval {
        #[arg(long = "ref", value_name = "PATH")]
        reference: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        baseline: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        rescored: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Write log-log rank/RF points for plotting.
    PlotData {
        #[arg(long, value_name = "PATH")]
        rf: Option<PathBuf>,
        #[command(flatten)]
        filter: SubOneFilter,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SubOneFilter {
    /// Drop rows with raw RF below 1 (default).
    #[arg(long, conflicts_with = "include_sub_one")]
    exclude_sub_one: bool,
    /// Keep rows with raw RF below 1.
    #[arg(long)]
    include_sub_one: bool,
}

impl SubOneFilter {
    fn flag(&self) -> Option<bool> {
        match (self.exclude_sub_one, self.include_sub_one) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        }
    }
}

fn parse_mode(s: &str) -> std::result::Result<RfMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Settings read from `--config`. Every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub mode: Option<RfMode>,
    pub lambda_ocr: Option<f64>,
    pub exclude_sub_one: Option<bool>,
    pub k: Option<f64>,
    pub ltd: Option<PathBuf>,
    #[serde(default)]
    pub ocr: Vec<PathBuf>,
    pub rf: Option<PathBuf>,
    pub fit: Option<PathBuf>,
    pub nbest: Option<PathBuf>,
    #[serde(rename = "ref")]
    pub reference: Option<PathBuf>,
    pub baseline: Option<PathBuf>,
    pub rescored: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| io_at(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => {
            require_exists(path)?;
            PipelineConfig::load(path)?
        }
        None => PipelineConfig::default(),
    };
    match cli.command {
        Command::BuildRf {
            ltd,
            ocr,
            mode,
            out,
        } => {
            let ltd = pick(ltd, cfg.ltd, "--ltd")?;
            let ocr = if ocr.is_empty() { cfg.ocr } else { ocr };
            if ocr.is_empty() {
                return Err(Error::config("missing --ocr"));
            }
            let mode = mode.or(cfg.mode).unwrap_or_default();
            let out = pick(out, cfg.out, "--out")?;
            require_exists(&ltd)?;
            for p in &ocr {
                require_exists(p)?;
            }

            let table = FrequencyTable::load(open(&ltd)?, &ltd.display().to_string())?;
            let mut docs = Vec::new();
            for p in &ocr {
                docs.extend(read_ocr_file(p)?);
            }
            let pool = WordPool::build(&docs)?;
            let rf = RfTable::compute(&table, &pool, mode)?;
            let mut buf = Vec::new();
            rf.write_csv(&mut buf)?;
            write_atomic(&out, &buf)
        }
        Command::Fit { rf, filter, out } => {
            let rf = pick(rf, cfg.rf, "--rf")?;
            let exclude = filter.flag().or(cfg.exclude_sub_one).unwrap_or(true);
            let out = pick(out, cfg.out, "--out")?;
            require_exists(&rf)?;

            let table = load_rf(&rf)?;
            let fit = fit_power_law(&table, exclude)?;
            write_atomic(&out, format!("{}\n", fit.to_json()).as_bytes())
        }
        Command::Rescore {
            rf,
            fit,
            nbest,
            lambda_ocr,
            k,
            out,
        } => {
            let rf = pick(rf, cfg.rf, "--rf")?;
            let nbest = pick(nbest, cfg.nbest, "--nbest")?;
            let out = pick(out, cfg.out, "--out")?;
            let fit = fit.or(cfg.fit);
            let k_override = k.or(cfg.k);
            let lambda_ocr = lambda_ocr
                .or(cfg.lambda_ocr)
                .unwrap_or(RescoreConfig::DEFAULT_LAMBDA);
            require_exists(&rf)?;
            require_exists(&nbest)?;
            if let Some(p) = &fit {
                require_exists(p)?;
            }

            let k = match (k_override, &fit) {
                (Some(k), _) => k,
                (None, Some(p)) => {
                    let text = fs::read_to_string(p).map_err(|e| io_at(p, e))?;
                    PowerLawFit::from_json(&text)
                        .map_err(|e| Error::validation(format!("{}: {e}", p.display())))?
                        .k
                }
                (None, None) => return Err(Error::config("rescore needs --fit or --k")),
            };
            let config = RescoreConfig::new(k, lambda_ocr)?;
            let table = load_rf(&rf)?;
            let lists = read_nbest_jsonl(open(&nbest)?, &nbest.display().to_string())?;
            let rescored = lists
                .iter()
                .map(|l| rescore_nbest(l, &table, &config))
                .collect::<Result<Vec<_>>>()?;
            let mut buf = Vec::new();
            write_nbest_jsonl(&rescored, &mut buf)?;
            write_atomic(&out, &buf)
        }
        Command::Eval {
            reference,
            baseline,
            rescored,
            out,
        } => {
            let reference = pick(reference, cfg.reference, "--ref")?;
            let baseline = pick(baseline, cfg.baseline, "--baseline")?;
            let rescored = pick(rescored, cfg.rescored, "--rescored")?;
            let out = pick(out, cfg.out, "--out")?;
            for p in [&reference, &baseline, &rescored] {
                require_exists(p)?;
            }

            let refs = read_references(open(&reference)?, &reference.display().to_string())?;
            let base = read_nbest_jsonl(open(&baseline)?, &baseline.display().to_string())?;
            let resc = read_nbest_jsonl(open(&rescored)?, &rescored.display().to_string())?;
            let report = compare_runs(&refs, &base, &resc)?;
            write_atomic(&out, format!("{}\n", report.to_json()).as_bytes())
        }
        Command::PlotData { rf, filter, out } => {
            let rf = pick(rf, cfg.rf, "--rf")?;
            let exclude = filter.flag().or(cfg.exclude_sub_one).unwrap_or(true);
            let out = pick(out, cfg.out, "--out")?;
            require_exists(&rf)?;

            let table = load_rf(&rf)?;
            let mut buf = Vec::new();
            write_plot_csv(&plot_points(&table, exclude), &mut buf)?;
            write_atomic(&out, &buf)
        }
    }
}

fn pick(flag: Option<PathBuf>, from_config: Option<PathBuf>, name: &str) -> Result<PathBuf> {
    flag.or(from_config)
        .ok_or_else(|| Error::config(format!("missing {name}")))
}

fn io_at(path: &Path, e: io::Error) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn require_exists(path: &Path) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(io_at(path, io::Error::from(io::ErrorKind::NotFound)))
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| io_at(path, e))
}

fn load_rf(path: &Path) -> Result<RfTable> {
    RfTable::read_csv(open(path)?, &path.display().to_string())
}

fn read_ocr_file(path: &Path) -> Result<Vec<OcrDocument>> {
    let name = path.display().to_string();
    let is_jsonl = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("jsonl" | "ndjson" | "json")
    );
    if is_jsonl {
        read_ocr_jsonl(open(path)?, &name)
    } else {
        let text = fs::read_to_string(path).map_err(|e| io_at(path, e))?;
        Ok(vec![plain_text_document(&name, text)?])
    }
}

/// Writes to a temporary file next to `path`, then renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_at(path, e))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| io_at(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_repeatable_ocr_and_mode() {
        let cli = Cli::try_parse_from([
            "termboost",
            "build-rf",
            "--ltd",
            "l.tsv",
            "--ocr",
            "a.jsonl",
            "--ocr",
            "b.txt",
            "--mode",
            "legacy",
            "--out",
            "rf.csv",
        ])
        .unwrap();
        match cli.command {
            Command::BuildRf { ocr, mode, .. } => {
                assert_eq!(ocr.len(), 2);
                assert_eq!(mode, Some(RfMode::Legacy));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sub_one_flags_conflict() {
        assert!(
            Cli::try_parse_from(["t", "fit", "--exclude-sub-one", "--include-sub-one"]).is_err()
        );
        let cli = Cli::try_parse_from(["t", "fit", "--include-sub-one"]).unwrap();
        match cli.command {
            Command::Fit { filter, .. } => assert_eq!(filter.flag(), Some(false)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_k_is_accepted_by_parser() {
        let cli = Cli::try_parse_from(["t", "rescore", "--k", "-0.9", "--lambda", "0.5"]).unwrap();
        match cli.command {
            Command::Rescore { k, lambda_ocr, .. } => {
                assert_eq!(k, Some(-0.9));
                assert_eq!(lambda_ocr, Some(0.5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_mode_is_a_usage_error() {
        assert_eq!(run(["t", "build-rf", "--mode", "method3"]), 2);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        fs::write(&p, r#"{"mode": "method1", "lambda_ocr": 0.5}"#).unwrap();
        let cfg = PipelineConfig::load(&p).unwrap();
        assert_eq!(cfg.mode, Some(RfMode::Method1));
        fs::write(&p, r#"{"lamda": 0.5}"#).unwrap();
        assert!(matches!(PipelineConfig::load(&p), Err(Error::Config(_))));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
