//! Domain-term boosting for ASR output from OCR'd lecture slides.
//!
//! The pipeline compares how often each word occurs in slide text captured
//! by OCR against a large general-domain unigram corpus, turns the ratio into
//! a relative frequency (RF), fits a power law to the rank/RF curve, and
//! uses the fitted slope to add an OCR bonus to decoder n-best scores.
//!
//! ```text
//! corpus::FrequencyTable ─┐
//!                         ├─> rf_model::RfTable ─> power_law::PowerLawFit
//! ocr_pool::WordPool ─────┘          │                     │ k
//!                                    └──────> rescore ─────┘ ─> eval
//! ```
//!
//! Runnable examples live under `examples/`, one per stage:
//!
//! ```bash
//! cargo run -p termboost --example load_corpus
//! cargo run -p termboost --example ocr_word_pool
//! cargo run -p termboost --example rf_modes
//! cargo run -p termboost --example legacy_pathology
//! cargo run -p termboost --example fit_power_law
//! cargo run -p termboost --example rescore_nbest
//! cargo run -p termboost --example evaluate_wer
//! cargo run -p termboost --example full_pipeline
//! ```

pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod ocr_pool;
pub mod power_law;
pub mod rescore;
pub mod rf_model;

pub use corpus::FrequencyTable;
pub use error::{Error, Result};
pub use eval::{compare_runs, word_error_rate, EvalReport};
pub use ocr_pool::{normalize_token, tokenize, OcrDocument, WordPool};
pub use power_law::{fit_power_law, plot_points, PowerLawFit};
pub use rescore::{merge_scores, rescore_nbest, score_ocr, Hypothesis, NBestList, RescoreConfig};
pub use rf_model::{clamp_rf, merged_counts, RfMode, RfRow, RfTable};
