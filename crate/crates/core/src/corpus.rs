//! Essay records with applicant covariates: ingestion, validation,
//! era partitioning, standardization, and the JSONL store.
//!
//! Ingest accepts CSV or JSONL; the canonical store is JSONL with one
//! record per line and deterministic field order. Every input row either
//! becomes a valid record or lands in the ingest report with a reason.
//! The 250-word minimum is evaluated with the shared tokenizer so length
//! filtering agrees with every downstream measure.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc;

/// Minimum essay length in word tokens.
pub const MIN_ESSAY_WORDS: usize = 250;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Admitted,
    ConditionalAdmit,
    Waitlisted,
    Rejected,
}

impl FromStr for Decision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace([' ', '_', '-'], "").as_str() {
            "admitted" | "admit" => Ok(Decision::Admitted),
            "conditionaladmit" | "conditionallyadmitted" => Ok(Decision::ConditionalAdmit),
            "waitlisted" | "waitlist" => Ok(Decision::Waitlisted),
            "rejected" | "reject" => Ok(Decision::Rejected),
            _ => Err(Error::invalid(format!("unknown decision '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sex {
    Female,
    Male,
}

impl FromStr for Sex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "female" | "f" => Ok(Sex::Female),
            "male" | "m" => Ok(Sex::Male),
            _ => Err(Error::invalid(format!("unknown sex '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FirstGen {
    FirstGen,
    MultiGen,
}

impl FromStr for FirstGen {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace([' ', '_', '-'], "").as_str() {
            "firstgen" | "first" | "firstgeneration" => Ok(FirstGen::FirstGen),
            "multigen" | "multi" | "continuinggen" => Ok(FirstGen::MultiGen),
            _ => Err(Error::invalid(format!("unknown first_gen '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchoolType {
    Home,
    Private,
    Public,
    Unknown,
}

impl FromStr for SchoolType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "home" | "homeschool" => Ok(SchoolType::Home),
            "private" => Ok(SchoolType::Private),
            "public" => Ok(SchoolType::Public),
            "unknown" | "" => Ok(SchoolType::Unknown),
            _ => Err(Error::invalid(format!("unknown school_type '{s}'"))),
        }
    }
}

impl fmt::Display for SchoolType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SchoolType::Home => "Home",
            SchoolType::Private => "Private",
            SchoolType::Public => "Public",
            SchoolType::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// Applicant covariates. Missing test scores stay `None`; they are never
/// encoded as sentinel numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovariateVector {
    pub sex: Sex,
    pub first_gen: FirstGen,
    pub school_type: SchoolType,
    pub gpa_scaled: f64,
    pub sat_rw: Option<f64>,
    pub sat_math: Option<f64>,
    pub act_composite: Option<f64>,
    pub act_math: Option<f64>,
    pub honors: bool,
    /// True once continuous academic fields have been standardized.
    #[serde(default)]
    pub standardized: bool,
}

/// One application: essay text plus covariates and the decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssayRecord {
    pub id: String,
    pub cycle_year: i32,
    pub essay_text: String,
    /// Fee-waiver flag (lower-SES proxy).
    pub fee_waiver: bool,
    pub decision: Decision,
    pub covariates: CovariateVector,
}

/// Positive outcome mapping: Admitted, ConditionalAdmit, and Waitlisted
/// advance in the process; Rejected does not.
pub fn binary_outcome(record: &EssayRecord) -> bool {
    record.decision != Decision::Rejected
}

/// Pre/post era split over cycle years.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EraPartition {
    pub pre_years: BTreeSet<i32>,
    pub post_years: BTreeSet<i32>,
    pub cutoff_rationale: String,
}

impl EraPartition {
    pub fn new(
        pre_years: impl IntoIterator<Item = i32>,
        post_years: impl IntoIterator<Item = i32>,
        cutoff_rationale: impl Into<String>,
    ) -> Result<Self> {
        let era = EraPartition {
            pre_years: pre_years.into_iter().collect(),
            post_years: post_years.into_iter().collect(),
            cutoff_rationale: cutoff_rationale.into(),
        };
        era.validate()?;
        Ok(era)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pre_years.is_empty() || self.post_years.is_empty() {
            return Err(Error::invalid("era partition requires nonempty pre and post year sets"));
        }
        if self.pre_years.intersection(&self.post_years).next().is_some() {
            return Err(Error::invalid("era partition year sets overlap"));
        }
        Ok(())
    }

    /// Some(true) for post years, Some(false) for pre years, None outside.
    pub fn is_post(&self, year: i32) -> Option<bool> {
        if self.post_years.contains(&year) {
            Some(true)
        } else if self.pre_years.contains(&year) {
            Some(false)
        } else {
            None
        }
    }

    pub fn all_years(&self) -> Vec<i32> {
        let mut years: Vec<i32> =
            self.pre_years.iter().chain(self.post_years.iter()).copied().collect();
        years.sort_unstable();
        years
    }
}

/// Split records into (pre, post, outside) buckets by cycle year.
pub fn partition(
    records: &[EssayRecord],
    era: &EraPartition,
) -> Result<(Vec<EssayRecord>, Vec<EssayRecord>, Vec<EssayRecord>)> {
    era.validate()?;
    let mut pre = Vec::new();
    let mut post = Vec::new();
    let mut outside = Vec::new();
    for r in records {
        match era.is_post(r.cycle_year) {
            Some(true) => post.push(r.clone()),
            Some(false) => pre.push(r.clone()),
            None => outside.push(r.clone()),
        }
    }
    Ok((pre, post, outside))
}

/// CSV/JSONL input format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IngestFormat {
    Csv,
    Jsonl,
}

/// Logical field to input column mapping. Defaults to the field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMap {
    pub id: String,
    pub cycle_year: String,
    pub essay_text: String,
    pub fee_waiver: String,
    pub decision: String,
    pub sex: String,
    pub first_gen: String,
    pub school_type: String,
    pub gpa_scaled: String,
    pub sat_rw: String,
    pub sat_math: String,
    pub act_composite: String,
    pub act_math: String,
    pub honors: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            id: "id".into(),
            cycle_year: "cycle_year".into(),
            essay_text: "essay_text".into(),
            fee_waiver: "fee_waiver".into(),
            decision: "decision".into(),
            sex: "sex".into(),
            first_gen: "first_gen".into(),
            school_type: "school_type".into(),
            gpa_scaled: "gpa_scaled".into(),
            sat_rw: "sat_rw".into(),
            sat_math: "sat_math".into(),
            act_composite: "act_composite".into(),
            act_math: "act_math".into(),
            honors: "honors".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IngestConfig {
    pub format: Option<IngestFormat>,
    pub columns: ColumnMap,
    pub min_words: usize,
    /// Inclusive cycle-year bounds.
    pub year_range: (i32, i32),
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            format: None,
            columns: ColumnMap::default(),
            min_words: MIN_ESSAY_WORDS,
            year_range: (2020, 2024),
        }
    }
}

/// Per-row rejection reasons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectReason {
    ShortEssay { words: usize },
    MissingField { field: String },
    BadValue { field: String, value: String },
    YearOutOfRange { year: i32 },
}

impl RejectReason {
    /// Stable key used for the per-reason counts.
    pub fn key(&self) -> String {
        match self {
            RejectReason::ShortEssay { .. } => format!("below {MIN_ESSAY_WORDS} words"),
            RejectReason::MissingField { field } => format!("missing {field}"),
            RejectReason::BadValue { field, .. } => format!("bad {field}"),
            RejectReason::YearOutOfRange { .. } => "year out of range".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedRow {
    /// 1-based data row number (header excluded for CSV).
    pub row: usize,
    pub id: Option<String>,
    pub reason: RejectReason,
}

/// Outcome summary of one ingest run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub n_read: usize,
    pub n_ingested: usize,
    pub n_rejected: usize,
    pub counts_by_reason: BTreeMap<String, usize>,
    pub rejected: Vec<RejectedRow>,
}

impl IngestReport {
    fn reject(&mut self, row: usize, id: Option<String>, reason: RejectReason) {
        *self.counts_by_reason.entry(reason.key()).or_insert(0) += 1;
        self.n_rejected += 1;
        self.rejected.push(RejectedRow { row, id, reason });
    }
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "y" => Ok(true),
        "false" | "0" | "no" | "n" => Ok(false),
        _ => Err(Error::invalid(format!("unknown boolean '{s}'"))),
    }
}

fn parse_opt_f64(s: &str) -> Result<Option<f64>> {
    let t = s.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("na") || t.eq_ignore_ascii_case("null") {
        return Ok(None);
    }
    t.parse::<f64>()
        .map(Some)
        .map_err(|_| Error::invalid(format!("not a number: '{s}'")))
}

/// Ingest a CSV or JSONL file into validated records plus a report.
///
/// Format comes from `config.format`, falling back to the file extension.
/// Duplicate ids abort the ingest.
pub fn ingest(path: &Path, config: &IngestConfig) -> Result<(Vec<EssayRecord>, IngestReport)> {
    let format = match config.format {
        Some(f) => f,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => IngestFormat::Csv,
            Some("jsonl") | Some("ndjson") => IngestFormat::Jsonl,
            other => {
                return Err(Error::invalid(format!(
                    "cannot infer format from extension {other:?}; declare csv or jsonl"
                )))
            }
        },
    };
    let (records, report) = match format {
        IngestFormat::Csv => ingest_csv(path, config)?,
        IngestFormat::Jsonl => ingest_jsonl(path, config)?,
    };
    let mut seen = HashSet::new();
    for r in &records {
        if !seen.insert(r.id.as_str()) {
            return Err(Error::invalid(format!("duplicate id '{}'", r.id)));
        }
    }
    Ok((records, report))
}

fn validate_record(
    record: EssayRecord,
    row: usize,
    config: &IngestConfig,
    report: &mut IngestReport,
    out: &mut Vec<EssayRecord>,
) {
    if record.id.trim().is_empty() {
        report.reject(row, None, RejectReason::MissingField { field: "id".into() });
        return;
    }
    let words = textproc::tokenize(&record.essay_text).word_count();
    if words < config.min_words {
        report.reject(row, Some(record.id.clone()), RejectReason::ShortEssay { words });
        return;
    }
    if record.cycle_year < config.year_range.0 || record.cycle_year > config.year_range.1 {
        report.reject(
            row,
            Some(record.id.clone()),
            RejectReason::YearOutOfRange { year: record.cycle_year },
        );
        return;
    }
    report.n_ingested += 1;
    out.push(record);
}

fn ingest_csv(path: &Path, config: &IngestConfig) -> Result<(Vec<EssayRecord>, IngestReport)> {
    let mut reader = csv::ReaderBuilder::new().flexible(false).from_path(path)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::invalid(format!("schema column '{name}' absent")))
    };
    let m = &config.columns;
    let idx_id = col(&m.id)?;
    let idx_year = col(&m.cycle_year)?;
    let idx_text = col(&m.essay_text)?;
    let idx_fw = col(&m.fee_waiver)?;
    let idx_dec = col(&m.decision)?;
    let idx_sex = col(&m.sex)?;
    let idx_fg = col(&m.first_gen)?;
    let idx_st = col(&m.school_type)?;
    let idx_gpa = col(&m.gpa_scaled)?;
    let idx_satrw = col(&m.sat_rw)?;
    let idx_satm = col(&m.sat_math)?;
    let idx_actc = col(&m.act_composite)?;
    let idx_actm = col(&m.act_math)?;
    let idx_hon = col(&m.honors)?;

    let mut report = IngestReport::default();
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let rownum = i + 1;
        report.n_read += 1;
        let id = row.get(idx_id).unwrap_or("").trim().to_string();
        let field = |idx: usize| row.get(idx).unwrap_or("");

        macro_rules! parse_or_reject {
            ($expr:expr, $field:literal, $raw:expr) => {
                match $expr {
                    Ok(v) => v,
                    Err(_) => {
                        report.reject(
                            rownum,
                            if id.is_empty() { None } else { Some(id.clone()) },
                            RejectReason::BadValue {
                                field: $field.to_string(),
                                value: $raw.to_string(),
                            },
                        );
                        continue;
                    }
                }
            };
        }

        let cycle_year: i32 =
            parse_or_reject!(field(idx_year).trim().parse(), "cycle_year", field(idx_year));
        let decision =
            parse_or_reject!(field(idx_dec).parse::<Decision>(), "decision", field(idx_dec));
        let sex = parse_or_reject!(field(idx_sex).parse::<Sex>(), "sex", field(idx_sex));
        let first_gen =
            parse_or_reject!(field(idx_fg).parse::<FirstGen>(), "first_gen", field(idx_fg));
        let school_type =
            parse_or_reject!(field(idx_st).parse::<SchoolType>(), "school_type", field(idx_st));
        let fee_waiver = parse_or_reject!(parse_bool(field(idx_fw)), "fee_waiver", field(idx_fw));
        let honors = parse_or_reject!(parse_bool(field(idx_hon)), "honors", field(idx_hon));
        let gpa_scaled: f64 =
            parse_or_reject!(field(idx_gpa).trim().parse(), "gpa_scaled", field(idx_gpa));
        let sat_rw = parse_or_reject!(parse_opt_f64(field(idx_satrw)), "sat_rw", field(idx_satrw));
        let sat_math =
            parse_or_reject!(parse_opt_f64(field(idx_satm)), "sat_math", field(idx_satm));
        let act_composite =
            parse_or_reject!(parse_opt_f64(field(idx_actc)), "act_composite", field(idx_actc));
        let act_math =
            parse_or_reject!(parse_opt_f64(field(idx_actm)), "act_math", field(idx_actm));

        let record = EssayRecord {
            id,
            cycle_year,
            essay_text: field(idx_text).to_string(),
            fee_waiver,
            decision,
            covariates: CovariateVector {
                sex,
                first_gen,
                school_type,
                gpa_scaled,
                sat_rw,
                sat_math,
                act_composite,
                act_math,
                honors,
                standardized: false,
            },
        };
        validate_record(record, rownum, config, &mut report, &mut out);
    }
    Ok((out, report))
}

fn ingest_jsonl(path: &Path, config: &IngestConfig) -> Result<(Vec<EssayRecord>, IngestReport)> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut report = IngestReport::default();
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rownum = i + 1;
        report.n_read += 1;
        match serde_json::from_str::<EssayRecord>(&line) {
            Ok(record) => validate_record(record, rownum, config, &mut report, &mut out),
            Err(e) => {
                report.reject(
                    rownum,
                    None,
                    RejectReason::BadValue { field: "record".into(), value: e.to_string() },
                );
            }
        }
    }
    Ok((out, report))
}

/// Write records to the canonical JSONL store, one record per line.
pub fn write_jsonl(path: &Path, records: &[EssayRecord]) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Read a JSONL store without re-validating (trusted round-trip path).
pub fn read_jsonl(path: &Path) -> Result<Vec<EssayRecord>> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str::<EssayRecord>(&line)?);
    }
    Ok(out)
}

/// Standardizable continuous covariate fields.
pub const CONTINUOUS_FIELDS: [&str; 5] =
    ["gpa_scaled", "sat_rw", "sat_math", "act_composite", "act_math"];

/// Mean and sample SD used for one standardized field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldStats {
    pub field: String,
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
}

fn field_values(record: &CovariateVector, field: &str) -> Result<Option<f64>> {
    Ok(match field {
        "gpa_scaled" => Some(record.gpa_scaled),
        "sat_rw" => record.sat_rw,
        "sat_math" => record.sat_math,
        "act_composite" => record.act_composite,
        "act_math" => record.act_math,
        _ => return Err(Error::invalid(format!("unknown continuous field '{field}'"))),
    })
}

fn set_field(record: &mut CovariateVector, field: &str, value: f64) {
    match field {
        "gpa_scaled" => record.gpa_scaled = value,
        "sat_rw" => record.sat_rw = Some(value),
        "sat_math" => record.sat_math = Some(value),
        "act_composite" => record.act_composite = Some(value),
        "act_math" => record.act_math = Some(value),
        _ => unreachable!("field checked by field_values"),
    }
}

/// Standardize the named continuous fields to mean 0, SD 1 (sample, n-1
/// denominator). Missing values stay missing. Errors on fields with fewer
/// than two non-missing values or zero variance.
pub fn standardize(
    records: &[EssayRecord],
    fields: &[&str],
) -> Result<(Vec<EssayRecord>, Vec<FieldStats>)> {
    let mut out = records.to_vec();
    let mut stats = Vec::with_capacity(fields.len());
    for &field in fields {
        let values: Vec<f64> = out
            .iter()
            .map(|r| field_values(&r.covariates, field))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        if values.len() < 2 {
            return Err(Error::InsufficientData { field: field.to_string() });
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        let sd = (ss / (n - 1.0)).sqrt();
        if sd == 0.0 {
            return Err(Error::ZeroVariance { field: field.to_string() });
        }
        for r in &mut out {
            if let Some(v) = field_values(&r.covariates, field)? {
                set_field(&mut r.covariates, field, (v - mean) / sd);
            }
        }
        stats.push(FieldStats { field: field.to_string(), mean, sd, n: values.len() });
    }
    for r in &mut out {
        r.covariates.standardized = true;
    }
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn covariates() -> CovariateVector {
        CovariateVector {
            sex: Sex::Female,
            first_gen: FirstGen::MultiGen,
            school_type: SchoolType::Public,
            gpa_scaled: 3.5,
            sat_rw: Some(700.0),
            sat_math: None,
            act_composite: None,
            act_math: None,
            honors: true,
            standardized: false,
        }
    }

    fn record(id: &str, year: i32, words: usize, decision: Decision) -> EssayRecord {
        EssayRecord {
            id: id.to_string(),
            cycle_year: year,
            essay_text: "word ".repeat(words),
            fee_waiver: false,
            decision,
            covariates: covariates(),
        }
    }

    fn essay_of(words: usize) -> String {
        let mut text = String::new();
        for i in 0..words {
            text.push_str(&format!("word{} ", i % 40));
            if i % 12 == 11 {
                text.pop();
                text.push_str(". ");
            }
        }
        text
    }

    fn csv_file(dir: &std::path::Path, rows: &[String]) -> std::path::PathBuf {
        let path = dir.join("input.csv");
        let mut f = File::create(&path).unwrap();
        writeln!(
            f,
            "id,cycle_year,essay_text,fee_waiver,decision,sex,first_gen,school_type,gpa_scaled,sat_rw,sat_math,act_composite,act_math,honors"
        )
        .unwrap();
        for r in rows {
            writeln!(f, "{r}").unwrap();
        }
        path
    }

    #[test]
    fn ingest_accepts_valid_row() {
        let dir = tempfile::tempdir().unwrap();
        let essay = essay_of(300);
        let path = csv_file(
            dir.path(),
            &[format!(
                "a1,2024,\"{essay}\",true,Admitted,Female,FirstGen,Public,3.9,720,,31,30,true"
            )],
        );
        let (records, report) = ingest(&path, &IngestConfig::default()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(report.n_rejected, 0);
        assert_eq!(records[0].covariates.sat_math, None);
        assert_eq!(records[0].covariates.act_composite, Some(31.0));
    }

    #[test]
    fn ingest_rejects_short_essay() {
        let dir = tempfile::tempdir().unwrap();
        let essay = essay_of(100);
        let path = csv_file(
            dir.path(),
            &[format!(
                "a1,2024,\"{essay}\",true,Admitted,Female,FirstGen,Public,3.9,720,,,,true"
            )],
        );
        let (records, report) = ingest(&path, &IngestConfig::default()).unwrap();
        assert!(records.is_empty());
        assert_eq!(report.n_rejected, 1);
        assert_eq!(report.counts_by_reason.get("below 250 words"), Some(&1));
    }

    #[test]
    fn waitlisted_is_positive_outcome() {
        let dir = tempfile::tempdir().unwrap();
        let essay = essay_of(260);
        let path = csv_file(
            dir.path(),
            &[format!(
                "a1,2024,\"{essay}\",false,Waitlisted,Male,MultiGen,Private,3.2,,,,,false"
            )],
        );
        let (records, _) = ingest(&path, &IngestConfig::default()).unwrap();
        assert!(binary_outcome(&records[0]));
    }

    #[test]
    fn outcome_mapping() {
        assert!(!binary_outcome(&record("r", 2024, 300, Decision::Rejected)));
        assert!(binary_outcome(&record("w", 2024, 300, Decision::Waitlisted)));
        assert!(binary_outcome(&record("c", 2024, 300, Decision::ConditionalAdmit)));
        assert!(binary_outcome(&record("a", 2024, 300, Decision::Admitted)));
    }

    #[test]
    fn duplicate_id_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let essay = essay_of(260);
        let row =
            format!("a1,2024,\"{essay}\",true,Admitted,Female,FirstGen,Public,3.9,,,,,true");
        let path = csv_file(dir.path(), &[row.clone(), row]);
        assert!(ingest(&path, &IngestConfig::default()).is_err());
    }

    #[test]
    fn missing_schema_column_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("input.csv");
        let mut f = File::create(&path).unwrap();
        writeln!(f, "id,essay_text").unwrap();
        writeln!(f, "a1,hello").unwrap();
        assert!(ingest(&path, &IngestConfig::default()).is_err());
    }

    #[test]
    fn bad_enum_is_rejected_with_reason() {
        let dir = tempfile::tempdir().unwrap();
        let essay = essay_of(260);
        let path = csv_file(
            dir.path(),
            &[format!(
                "a1,2024,\"{essay}\",true,Perhaps,Female,FirstGen,Public,3.9,,,,,true"
            )],
        );
        let (records, report) = ingest(&path, &IngestConfig::default()).unwrap();
        assert!(records.is_empty());
        assert_eq!(report.counts_by_reason.get("bad decision"), Some(&1));
    }

    #[test]
    fn partition_buckets_by_year() {
        let era = EraPartition::new(2020..=2023, [2024], "post-release cycle").unwrap();
        let records = vec![
            record("a", 2024, 300, Decision::Admitted),
            record("b", 2019, 300, Decision::Rejected),
            record("c", 2021, 300, Decision::Rejected),
        ];
        let (pre, post, outside) = partition(&records, &era).unwrap();
        assert_eq!(pre.len(), 1);
        assert_eq!(post.len(), 1);
        assert_eq!(outside.len(), 1);
        assert_eq!(post[0].id, "a");
        assert_eq!(outside[0].id, "b");
        assert_eq!(pre.len() + post.len() + outside.len(), records.len());
    }

    #[test]
    fn partition_empty_input() {
        let era = EraPartition::new([2020], [2024], "test").unwrap();
        let (pre, post, outside) = partition(&[], &era).unwrap();
        assert!(pre.is_empty() && post.is_empty() && outside.is_empty());
    }

    #[test]
    fn overlapping_eras_rejected() {
        assert!(EraPartition::new([2020, 2021], [2021, 2024], "bad").is_err());
    }

    #[test]
    fn standardize_hand_example() {
        let mut records = vec![
            record("a", 2024, 300, Decision::Admitted),
            record("b", 2024, 300, Decision::Admitted),
            record("c", 2024, 300, Decision::Admitted),
        ];
        records[0].covariates.gpa_scaled = 1.0;
        records[1].covariates.gpa_scaled = 2.0;
        records[2].covariates.gpa_scaled = 3.0;
        let (out, stats) = standardize(&records, &["gpa_scaled"]).unwrap();
        let got: Vec<f64> = out.iter().map(|r| r.covariates.gpa_scaled).collect();
        assert!((got[0] - -1.0).abs() < 1e-12);
        assert!((got[1] - 0.0).abs() < 1e-12);
        assert!((got[2] - 1.0).abs() < 1e-12);
        assert_eq!(stats[0].sd, 1.0);
        assert!(out.iter().all(|r| r.covariates.standardized));

        // transformed mean 0 and sd 1 within 1e-9
        let n = got.len() as f64;
        let mean = got.iter().sum::<f64>() / n;
        let sd = (got.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!(mean.abs() < 1e-9);
        assert!((sd - 1.0).abs() < 1e-9);
    }

    #[test]
    fn standardize_keeps_missing_and_rank_order() {
        let mut records = vec![
            record("a", 2024, 300, Decision::Admitted),
            record("b", 2024, 300, Decision::Admitted),
            record("c", 2024, 300, Decision::Admitted),
        ];
        records[0].covariates.sat_rw = Some(600.0);
        records[1].covariates.sat_rw = None;
        records[2].covariates.sat_rw = Some(750.0);
        let (out, _) = standardize(&records, &["sat_rw"]).unwrap();
        assert_eq!(out[1].covariates.sat_rw, None);
        assert!(out[0].covariates.sat_rw.unwrap() < out[2].covariates.sat_rw.unwrap());
    }

    #[test]
    fn standardize_degenerate_errors() {
        let records = vec![
            record("a", 2024, 300, Decision::Admitted),
            record("b", 2024, 300, Decision::Admitted),
        ];
        // constant field
        assert!(matches!(
            standardize(&records, &["gpa_scaled"]),
            Err(Error::ZeroVariance { .. })
        ));
        // single value
        let mut one = vec![record("a", 2024, 300, Decision::Admitted)];
        one[0].covariates.sat_math = Some(700.0);
        assert!(matches!(
            standardize(&one, &["sat_math"]),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn jsonl_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.jsonl");
        let mut records = vec![
            record("a", 2024, 300, Decision::Admitted),
            record("b", 2021, 300, Decision::Rejected),
        ];
        records[0].essay_text = format!("{} with unicode \u{2019} and \"quotes\"", essay_of(251));
        write_jsonl(&path, &records).unwrap();
        let back = read_jsonl(&path).unwrap();
        assert_eq!(records, back);

        // ingest of the serialized store keeps every valid record
        let (ingested, report) = ingest(&path, &IngestConfig::default()).unwrap();
        assert_eq!(ingested, records);
        assert_eq!(report.n_rejected, 0);
    }

    #[test]
    fn word_filter_is_idempotent() {
        let keep = |rs: &[EssayRecord]| -> Vec<EssayRecord> {
            rs.iter()
                .filter(|r| textproc::tokenize(&r.essay_text).word_count() >= MIN_ESSAY_WORDS)
                .cloned()
                .collect()
        };
        let records = vec![
            record("a", 2024, 300, Decision::Admitted),
            record("b", 2024, 100, Decision::Admitted),
        ];
        let once = keep(&records);
        let twice = keep(&once);
        assert_eq!(once, twice);
        assert_eq!(once.len(), 1);
    }
}
