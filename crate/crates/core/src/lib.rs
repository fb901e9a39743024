//! essaystat: distributional estimation of LLM-generated text fractions in
//! essay corpora, stylometric feature extraction, and the admissions
//! econometrics built on top of both.
//!
//! The crate is organized around the pipeline:
//!
//! 1. [`corpus`] — ingest, validate, and partition essay records.
//! 2. [`textproc`] — shared deterministic tokenization and syllable counting.
//! 3. [`stylometry`] — the eleven per-essay linguistic features.
//! 4. [`refgen`] — LLM reference-essay acquisition (HTTP client + offline
//!    generator) and the bundled human text pool.
//! 5. [`mixdetect`] — human/LLM reference distributions and per-essay
//!    mixture-fraction estimation.
//! 6. [`stats`] — logistic (IRLS) and OLS fitting, Wald/t/chi-square tests.
//! 7. [`econo`] — difference-in-differences, stratified/interaction models,
//!    mediation, and the robustness battery.
//! 8. [`simlab`] — seeded synthetic populations with planted effects for
//!    estimator validation.

pub mod corpus;
pub mod econo;
pub mod error;
pub mod frame;
pub mod mixdetect;
pub mod refgen;
pub mod simlab;
pub mod stats;
pub mod stylometry;
pub mod tables;
pub mod textproc;

pub use error::{Error, Result};
