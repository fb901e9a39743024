//! The eleven per-essay linguistic features: counts, lengths, lexical
//! diversity (TTR, Maas, MTLD, HD-D, Yule's K), and complexity.
//!
//! Parameter choices follow the cited originals: MTLD factor threshold 0.72,
//! HD-D sample size 42 (reported on a x100 scale), Maas with natural logs.
//! Complexity is 1 minus Flesch Reading Ease, so harder text scores higher.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::{count_syllables, TokenStream};

/// Default MTLD factor threshold.
pub const MTLD_THRESHOLD: f64 = 0.72;
/// Default HD-D sample size.
pub const HDD_SAMPLE_SIZE: usize = 42;

/// Column order for feature export. Fixed; every CSV and table emitter
/// uses this ordering.
pub const FEATURE_NAMES: [&str; 11] = [
    "n_tokens",
    "n_words",
    "n_types",
    "avg_word_len",
    "avg_sentence_len",
    "ttr",
    "maas_ttr",
    "mtld",
    "hdd",
    "yules_k",
    "complexity",
];

/// Human-readable feature labels, in the same order as [`FEATURE_NAMES`].
pub const FEATURE_LABELS: [&str; 11] = [
    "# tokens",
    "# words",
    "# types",
    "Avg. word length",
    "Avg. sentence length",
    "TTR",
    "MAAS_TTR",
    "MTLD",
    "HDD",
    "Yules' K",
    "Complexity",
];

/// The stylometric profile of one essay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    /// Word tokens plus punctuation runs.
    pub n_tokens: usize,
    /// Word tokens only.
    pub n_words: usize,
    /// Distinct word tokens.
    pub n_types: usize,
    /// Mean characters per word token.
    pub avg_word_len: f64,
    /// Mean word tokens per sentence.
    pub avg_sentence_len: f64,
    pub ttr: f64,
    pub maas_ttr: f64,
    pub mtld: f64,
    /// HD-D on the x100 scale.
    pub hdd: f64,
    pub yules_k: f64,
    /// 1 - Flesch Reading Ease.
    pub complexity: f64,
}

impl FeatureVector {
    /// Values in [`FEATURE_NAMES`] order.
    pub fn values(&self) -> [f64; 11] {
        [
            self.n_tokens as f64,
            self.n_words as f64,
            self.n_types as f64,
            self.avg_word_len,
            self.avg_sentence_len,
            self.ttr,
            self.maas_ttr,
            self.mtld,
            self.hdd,
            self.yules_k,
            self.complexity,
        ]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values()[i])
    }
}

fn type_counts(tokens: &[String]) -> HashMap<&str, usize> {
    let mut freq: HashMap<&str, usize> = HashMap::with_capacity(tokens.len() / 2);
    for t in tokens {
        *freq.entry(t.as_str()).or_insert(0) += 1;
    }
    freq
}

/// Type-token ratio: distinct words over total words.
pub fn ttr(stream: &TokenStream) -> Result<f64> {
    if stream.tokens.is_empty() {
        return Err(Error::invalid("ttr requires at least one word token"));
    }
    let v = type_counts(&stream.tokens).len();
    Ok(v as f64 / stream.tokens.len() as f64)
}

/// Maas index: (ln N - ln V) / (ln N)^2 with natural logarithms. Zero when
/// every token is distinct.
pub fn maas_ttr(stream: &TokenStream) -> Result<f64> {
    let n = stream.tokens.len();
    if n < 2 {
        return Err(Error::invalid("maas_ttr requires at least two word tokens"));
    }
    let v = type_counts(&stream.tokens).len() as f64;
    let n = n as f64;
    Ok((n.ln() - v.ln()) / (n.ln() * n.ln()))
}

fn mtld_pass<'a, I>(tokens: I, n: usize, threshold: f64) -> f64
where
    I: Iterator<Item = &'a String>,
{
    let mut full_factors = 0usize;
    let mut window: HashMap<&str, usize> = HashMap::new();
    let mut window_len = 0usize;
    let mut window_types = 0usize;

    for t in tokens {
        window_len += 1;
        let c = window.entry(t.as_str()).or_insert(0);
        if *c == 0 {
            window_types += 1;
        }
        *c += 1;
        if (window_types as f64 / window_len as f64) < threshold {
            full_factors += 1;
            window.clear();
            window_len = 0;
            window_types = 0;
        }
    }

    // Convention: if the running TTR never dropped below the threshold the
    // pass value is N.
    if full_factors == 0 {
        return n as f64;
    }
    let mut factors = full_factors as f64;
    if window_len > 0 {
        let rem_ttr = window_types as f64 / window_len as f64;
        factors += (1.0 - rem_ttr) / (1.0 - threshold);
    }
    n as f64 / factors
}

/// MTLD with an explicit factor threshold: mean of the forward and backward
/// passes.
pub fn mtld_with(stream: &TokenStream, threshold: f64) -> Result<f64> {
    let n = stream.tokens.len();
    if n < 10 {
        return Err(Error::invalid("mtld requires at least ten word tokens"));
    }
    if !(0.0 < threshold && threshold < 1.0) {
        return Err(Error::invalid("mtld threshold must lie in (0, 1)"));
    }
    let forward = mtld_pass(stream.tokens.iter(), n, threshold);
    let backward = mtld_pass(stream.tokens.iter().rev(), n, threshold);
    Ok((forward + backward) / 2.0)
}

/// MTLD at the standard 0.72 threshold.
pub fn mtld(stream: &TokenStream) -> Result<f64> {
    mtld_with(stream, MTLD_THRESHOLD)
}

/// HD-D with an explicit sample size, on the x100 scale.
///
/// For a type with frequency f the inclusion probability in a uniform
/// `sample_size`-token draw without replacement is
/// 1 - C(N-f, k)/C(N, k), computed as a running product.
pub fn hdd_with(stream: &TokenStream, sample_size: usize) -> Result<f64> {
    let n = stream.tokens.len();
    if sample_size == 0 {
        return Err(Error::invalid("hdd sample size must be positive"));
    }
    if n < sample_size {
        return Err(Error::invalid(format!(
            "hdd requires at least {sample_size} word tokens, got {n}"
        )));
    }
    let freq = type_counts(&stream.tokens);
    let mut sum = 0.0;
    for &f in freq.values() {
        let mut p_absent = 1.0;
        for i in 0..sample_size {
            let num = (n - f) as f64 - i as f64;
            if num <= 0.0 {
                p_absent = 0.0;
                break;
            }
            p_absent *= num / (n - i) as f64;
        }
        sum += (1.0 - p_absent) / sample_size as f64;
    }
    Ok(sum * 100.0)
}

/// HD-D at the standard sample size of 42.
pub fn hdd(stream: &TokenStream) -> Result<f64> {
    hdd_with(stream, HDD_SAMPLE_SIZE)
}

/// Yule's K: 10^4 * (sum_m m^2 V_m - N) / N^2.
pub fn yules_k(stream: &TokenStream) -> Result<f64> {
    let n = stream.tokens.len();
    if n == 0 {
        return Err(Error::invalid("yules_k requires at least one word token"));
    }
    let freq = type_counts(&stream.tokens);
    let mut m2v: f64 = 0.0;
    for &f in freq.values() {
        m2v += (f * f) as f64;
    }
    let n = n as f64;
    Ok(1e4 * (m2v - n) / (n * n))
}

/// Complexity: 1 - Flesch Reading Ease.
///
/// FRE = 206.835 - 1.015 (words/sentences) - 84.6 (syllables/words).
pub fn complexity(stream: &TokenStream) -> Result<f64> {
    let words = stream.tokens.len();
    let sentences = stream.sentence_count();
    if words == 0 || sentences == 0 {
        return Err(Error::invalid("complexity requires at least one sentence with words"));
    }
    let syllables: usize = stream.tokens.iter().map(|t| count_syllables(t)).sum();
    let fre = 206.835
        - 1.015 * (words as f64 / sentences as f64)
        - 84.6 * (syllables as f64 / words as f64);
    Ok(1.0 - fre)
}

/// Compute all eleven features for one essay.
pub fn feature_vector(stream: &TokenStream) -> Result<FeatureVector> {
    let n_words = stream.tokens.len();
    if n_words == 0 {
        return Err(Error::invalid("feature_vector requires a nonempty essay"));
    }
    let n_types = type_counts(&stream.tokens).len();
    let total_chars: usize = stream.tokens.iter().map(|t| t.chars().count()).sum();
    Ok(FeatureVector {
        n_tokens: stream.raw_token_count,
        n_words,
        n_types,
        avg_word_len: total_chars as f64 / n_words as f64,
        avg_sentence_len: n_words as f64 / stream.sentence_count() as f64,
        ttr: ttr(stream)?,
        maas_ttr: maas_ttr(stream)?,
        mtld: mtld(stream)?,
        hdd: hdd(stream)?,
        yules_k: yules_k(stream)?,
        complexity: complexity(stream)?,
    })
}
