//! Human/LLM reference token distributions and per-essay estimation of the
//! LLM-generated fraction by maximum likelihood.
//!
//! An essay is modeled as a token-level mixture
//! `(1 - alpha) * p_H(t) + alpha * p_A(t)` between a human and an LLM
//! reference distribution. The log-likelihood is concave in `alpha`, so the
//! maximizer on [0, 1] is found by an endpoint-derivative check (which
//! returns boundary solutions exactly, giving the observed point mass at
//! zero) followed by golden-section search in the interior.
//!
//! The estimate reflects aggregate distributional similarity, not
//! ground-truth identification of individual LLM use.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::textproc::{tokenize, TokenStream};

/// Golden ratio constant for the section search.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceLabel {
    Human,
    Llm,
}

/// Smoothed unigram distribution over a fixed vocabulary plus one
/// out-of-vocabulary bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenDistribution {
    /// Sorted vocabulary.
    pub vocabulary: Vec<String>,
    /// Probability per vocabulary token, aligned with `vocabulary`.
    pub probs: Vec<f64>,
    /// Probability of the pooled out-of-vocabulary bucket.
    pub oov_prob: f64,
    pub smoothing_lambda: f64,
    pub min_count: usize,
    pub source_label: SourceLabel,
    /// SHA-256 digest of the token counts this distribution was fit on.
    pub provenance: String,
}

impl TokenDistribution {
    /// Sum of all probabilities including the OOV bucket (should be 1).
    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum::<f64>() + self.oov_prob
    }

    pub fn validate(&self) -> Result<()> {
        if self.probs.len() != self.vocabulary.len() {
            return Err(Error::invalid("vocabulary/probability length mismatch"));
        }
        if self.probs.iter().any(|&p| p <= 0.0) || self.oov_prob <= 0.0 {
            return Err(Error::invalid("token probabilities must be strictly positive"));
        }
        if (self.total_mass() - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "probabilities sum to {} (expected 1 within 1e-12)",
                self.total_mass()
            )));
        }
        Ok(())
    }

    /// KL divergence from `other` to `self` over the shared vocabulary plus
    /// OOV bucket. Both distributions must share vocabulary construction.
    pub fn kl_from(&self, other: &TokenDistribution) -> Result<f64> {
        if self.vocabulary != other.vocabulary {
            return Err(Error::invalid("KL requires identical vocabularies"));
        }
        let mut kl = 0.0;
        for (p, q) in self.probs.iter().zip(&other.probs) {
            kl += p * (p / q).ln();
        }
        kl += self.oov_prob * (self.oov_prob / other.oov_prob).ln();
        Ok(kl)
    }
}

/// Detector parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    /// Add-lambda smoothing weight.
    pub smoothing_lambda: f64,
    /// Tokens rarer than this in the reference corpora pool into OOV.
    pub min_count: usize,
    /// Golden-section convergence tolerance on alpha.
    pub optimizer_tol: f64,
    pub max_iterations: usize,
    /// When set, score only these tokens and skip the rest entirely.
    pub token_subset: Option<BTreeSet<String>>,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            smoothing_lambda: 0.5,
            min_count: 5,
            optimizer_tol: 1e-6,
            max_iterations: 200,
            token_subset: None,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.smoothing_lambda <= 0.0 {
            return Err(Error::invalid("smoothing_lambda must be positive"));
        }
        if !(self.optimizer_tol > 0.0 && self.optimizer_tol < 0.1) {
            return Err(Error::invalid("optimizer_tol must lie in (0, 0.1)"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be positive"));
        }
        Ok(())
    }
}

/// Usage category per the zero / tercile stratification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UsageCategory {
    None,
    Low,
    Medium,
    High,
}

impl UsageCategory {
    pub fn label(&self) -> &'static str {
        match self {
            UsageCategory::None => "None",
            UsageCategory::Low => "Low",
            UsageCategory::Medium => "Medium",
            UsageCategory::High => "High",
        }
    }

    pub const ALL: [UsageCategory; 4] =
        [UsageCategory::None, UsageCategory::Low, UsageCategory::Medium, UsageCategory::High];
}

/// Upper bounds of the Low and Medium usage bands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UsageThresholds {
    pub low_upper: f64,
    pub medium_upper: f64,
}

impl Default for UsageThresholds {
    fn default() -> Self {
        UsageThresholds { low_upper: 0.07, medium_upper: 0.13 }
    }
}

impl UsageThresholds {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.low_upper && self.low_upper < self.medium_upper && self.medium_upper < 1.0)
        {
            return Err(Error::invalid(format!(
                "thresholds must satisfy 0 < low ({}) < medium ({}) < 1",
                self.low_upper, self.medium_upper
            )));
        }
        Ok(())
    }
}

/// Zero maps to None; (0, low] Low; (low, medium] Medium; above that High.
pub fn categorize(alpha_hat: f64, thresholds: &UsageThresholds) -> UsageCategory {
    if alpha_hat == 0.0 {
        UsageCategory::None
    } else if alpha_hat <= thresholds.low_upper {
        UsageCategory::Low
    } else if alpha_hat <= thresholds.medium_upper {
        UsageCategory::Medium
    } else {
        UsageCategory::High
    }
}

/// 33.33/66.67 empirical percentiles (order statistics) of the strictly
/// positive estimates.
pub fn tercile_thresholds(estimates: &[f64]) -> Result<UsageThresholds> {
    let mut positives: Vec<f64> = estimates.iter().copied().filter(|&a| a > 0.0).collect();
    if positives.len() < 3 {
        return Err(Error::invalid(format!(
            "tercile thresholds need at least 3 positive estimates, got {}",
            positives.len()
        )));
    }
    positives.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = positives.len() as f64;
    let order_stat = |p: f64| -> f64 {
        let idx = (n * p - 1e-9).ceil().max(1.0) as usize;
        positives[idx - 1]
    };
    let thresholds =
        UsageThresholds { low_upper: order_stat(1.0 / 3.0), medium_upper: order_stat(2.0 / 3.0) };
    if thresholds.low_upper >= thresholds.medium_upper {
        return Err(Error::invalid(
            "degenerate tercile thresholds: positive estimates are too concentrated",
        ));
    }
    thresholds.validate()?;
    Ok(thresholds)
}

/// Per-essay estimate with likelihood diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaEstimate {
    pub alpha_hat: f64,
    pub loglik_at_opt: f64,
    pub loglik_at_zero: f64,
    pub n_scored_tokens: usize,
    /// Category under the default paper thresholds; re-categorize with
    /// [`categorize`] when tercile thresholds are in play.
    pub category: UsageCategory,
}

fn digest_counts(counts: &HashMap<String, usize>, lambda: f64, min_count: usize) -> String {
    let mut items: Vec<(&str, usize)> = counts.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    items.sort();
    let mut hasher = Sha256::new();
    hasher.update(format!("lambda={lambda};min_count={min_count};").as_bytes());
    for (token, count) in items {
        hasher.update(token.as_bytes());
        hasher.update(b"=");
        hasher.update(count.to_le_bytes());
        hasher.update(b";");
    }
    hex::encode(hasher.finalize())
}

fn count_tokens(essays: &[String]) -> HashMap<String, usize> {
    let mut counts: HashMap<String, usize> = HashMap::new();
    for essay in essays {
        for token in tokenize(essay).tokens {
            *counts.entry(token).or_insert(0) += 1;
        }
    }
    counts
}

fn fit_from_counts(
    counts: &HashMap<String, usize>,
    vocabulary: &[String],
    lambda: f64,
    min_count: usize,
    label: SourceLabel,
) -> TokenDistribution {
    let vocab_set: BTreeSet<&str> = vocabulary.iter().map(|s| s.as_str()).collect();
    let mut total: usize = 0;
    let mut oov_count: usize = 0;
    let mut vocab_counts: HashMap<&str, usize> = HashMap::new();
    for (token, &count) in counts {
        total += count;
        if vocab_set.contains(token.as_str()) {
            *vocab_counts.entry(token.as_str()).or_insert(0) += count;
        } else {
            oov_count += count;
        }
    }
    let v = vocabulary.len() as f64;
    let denom = total as f64 + lambda * (v + 1.0);
    let probs: Vec<f64> = vocabulary
        .iter()
        .map(|t| (*vocab_counts.get(t.as_str()).unwrap_or(&0) as f64 + lambda) / denom)
        .collect();
    TokenDistribution {
        vocabulary: vocabulary.to_vec(),
        probs,
        oov_prob: (oov_count as f64 + lambda) / denom,
        smoothing_lambda: lambda,
        min_count,
        source_label: label,
        provenance: digest_counts(counts, lambda, min_count),
    }
}

/// Fit a single reference distribution; the vocabulary is every token with
/// count >= `min_count` in `essays`, the rest pools into OOV.
pub fn fit_reference(
    essays: &[String],
    lambda: f64,
    min_count: usize,
    label: SourceLabel,
) -> Result<TokenDistribution> {
    if essays.is_empty() {
        return Err(Error::invalid("cannot fit a reference distribution on an empty corpus"));
    }
    if lambda <= 0.0 {
        return Err(Error::invalid("smoothing lambda must be positive"));
    }
    let counts = count_tokens(essays);
    if counts.is_empty() {
        return Err(Error::invalid("reference corpus has no word tokens"));
    }
    let mut vocabulary: Vec<String> = counts
        .iter()
        .filter(|(_, &c)| c >= min_count)
        .map(|(t, _)| t.clone())
        .collect();
    vocabulary.sort();
    let dist = fit_from_counts(&counts, &vocabulary, lambda, min_count, label);
    dist.validate()?;
    Ok(dist)
}

/// The paired human/LLM references sharing one vocabulary, as used by the
/// scoring pipeline. Serialized with a format version and corpus digests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferencePair {
    pub version: u32,
    pub human: TokenDistribution,
    pub llm: TokenDistribution,
}

pub const REFERENCE_FORMAT_VERSION: u32 = 1;

impl ReferencePair {
    /// Fit both references over the shared vocabulary: tokens with count
    /// >= `min_count` in the union of the two corpora.
    pub fn fit(
        human_essays: &[String],
        llm_essays: &[String],
        config: &DetectorConfig,
    ) -> Result<ReferencePair> {
        config.validate()?;
        if human_essays.is_empty() || llm_essays.is_empty() {
            return Err(Error::invalid("both reference corpora must be nonempty"));
        }
        let human_counts = count_tokens(human_essays);
        let llm_counts = count_tokens(llm_essays);
        let mut union: HashMap<String, usize> = human_counts.clone();
        for (t, c) in &llm_counts {
            *union.entry(t.clone()).or_insert(0) += c;
        }
        let mut vocabulary: Vec<String> = union
            .iter()
            .filter(|(_, &c)| c >= config.min_count)
            .map(|(t, _)| t.clone())
            .collect();
        vocabulary.sort();
        if vocabulary.is_empty() {
            return Err(Error::invalid("no tokens meet min_count in the reference union"));
        }
        let human = fit_from_counts(
            &human_counts,
            &vocabulary,
            config.smoothing_lambda,
            config.min_count,
            SourceLabel::Human,
        );
        let llm = fit_from_counts(
            &llm_counts,
            &vocabulary,
            config.smoothing_lambda,
            config.min_count,
            SourceLabel::Llm,
        );
        human.validate()?;
        llm.validate()?;
        Ok(ReferencePair { version: REFERENCE_FORMAT_VERSION, human, llm })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path)?;
        serde_json::to_writer(BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<ReferencePair> {
        let file = File::open(path)?;
        let pair: ReferencePair = serde_json::from_reader(BufReader::new(file))?;
        if pair.version != REFERENCE_FORMAT_VERSION {
            return Err(Error::invalid(format!(
                "unsupported reference file version {}",
                pair.version
            )));
        }
        pair.human.validate()?;
        pair.llm.validate()?;
        if pair.human.vocabulary != pair.llm.vocabulary {
            return Err(Error::invalid("reference pair vocabularies differ"));
        }
        Ok(pair)
    }
}

/// Joined lookup over a reference pair, ready to score essays.
pub struct Scorer {
    lookup: HashMap<String, (f64, f64)>,
    oov: (f64, f64),
    tol: f64,
    max_iterations: usize,
    token_subset: Option<BTreeSet<String>>,
}

impl Scorer {
    pub fn new(pair: &ReferencePair, config: &DetectorConfig) -> Result<Scorer> {
        config.validate()?;
        if pair.human.vocabulary != pair.llm.vocabulary {
            return Err(Error::invalid(
                "references must share vocabulary construction to be mixed",
            ));
        }
        let mut lookup = HashMap::with_capacity(pair.human.vocabulary.len());
        for (i, token) in pair.human.vocabulary.iter().enumerate() {
            lookup.insert(token.clone(), (pair.human.probs[i], pair.llm.probs[i]));
        }
        Ok(Scorer {
            lookup,
            oov: (pair.human.oov_prob, pair.llm.oov_prob),
            tol: config.optimizer_tol,
            max_iterations: config.max_iterations,
            token_subset: config.token_subset.clone(),
        })
    }

    fn count_scoreable<'a>(
        &self,
        streams: impl Iterator<Item = &'a TokenStream>,
    ) -> HashMap<&'a str, usize> {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for stream in streams {
            for t in &stream.tokens {
                if let Some(subset) = &self.token_subset {
                    if !subset.contains(t.as_str()) {
                        continue;
                    }
                }
                *counts.entry(t.as_str()).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Aggregate tokens into (count, p_H, p_A) triples. OOV tokens score
    /// against the OOV bucket; with a configured token subset, tokens
    /// outside the subset are skipped instead.
    fn profile(&self, stream: &TokenStream) -> Vec<(f64, f64, f64)> {
        self.triples(self.count_scoreable(std::iter::once(stream)))
    }

    fn triples(&self, counts: HashMap<&str, usize>) -> Vec<(f64, f64, f64)> {
        counts
            .into_iter()
            .map(|(t, c)| {
                let (ph, pa) = self.lookup.get(t).copied().unwrap_or(self.oov);
                (c as f64, ph, pa)
            })
            .collect()
    }

    /// Maximum-likelihood mixture weight for one essay.
    pub fn estimate_alpha(&self, stream: &TokenStream) -> Result<AlphaEstimate> {
        let profile = self.profile(stream);
        self.estimate_from_profile(&profile)
    }

    /// Pooled maximum-likelihood mixture weight for a whole corpus.
    pub fn estimate_corpus_alpha(&self, streams: &[TokenStream]) -> Result<AlphaEstimate> {
        if streams.is_empty() {
            return Err(Error::invalid("corpus estimate requires at least one essay"));
        }
        let profile = self.triples(self.count_scoreable(streams.iter()));
        self.estimate_from_profile(&profile)
    }

    fn estimate_from_profile(&self, profile: &[(f64, f64, f64)]) -> Result<AlphaEstimate> {
        let n_scored: f64 = profile.iter().map(|(c, _, _)| c).sum();
        if profile.is_empty() || n_scored == 0.0 {
            return Err(Error::invalid("essay has no scoreable tokens"));
        }

        let loglik = |alpha: f64| -> f64 {
            profile
                .iter()
                .map(|&(c, ph, pa)| c * ((1.0 - alpha) * ph + alpha * pa).ln())
                .sum()
        };
        // One-sided derivatives at the endpoints; concavity makes the
        // endpoint optimal whenever the likelihood does not increase inward.
        let d0: f64 = profile.iter().map(|&(c, ph, pa)| c * (pa - ph) / ph).sum();
        let d1: f64 = profile.iter().map(|&(c, ph, pa)| c * (pa - ph) / pa).sum();

        let alpha_hat = if d0 <= 0.0 {
            0.0
        } else if d1 >= 0.0 {
            1.0
        } else {
            self.golden_section(&loglik)
        };

        let loglik_at_zero = loglik(0.0);
        let loglik_at_opt = loglik(alpha_hat).max(loglik_at_zero);
        Ok(AlphaEstimate {
            alpha_hat,
            loglik_at_opt,
            loglik_at_zero,
            n_scored_tokens: n_scored as usize,
            category: categorize(alpha_hat, &UsageThresholds::default()),
        })
    }

    fn golden_section(&self, f: &dyn Fn(f64) -> f64) -> f64 {
        let mut a = 0.0_f64;
        let mut b = 1.0_f64;
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = f(c);
        let mut fd = f(d);
        for _ in 0..self.max_iterations {
            if (b - a) < self.tol {
                break;
            }
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = f(d);
            }
        }
        ((a + b) / 2.0).clamp(0.0, 1.0)
    }

    /// Log-likelihood of one essay at a given alpha (diagnostics and tests).
    pub fn loglik(&self, stream: &TokenStream, alpha: f64) -> Result<f64> {
        let profile = self.profile(stream);
        if profile.is_empty() {
            return Err(Error::invalid("essay has no scoreable tokens"));
        }
        Ok(profile
            .iter()
            .map(|&(c, ph, pa)| c * ((1.0 - alpha) * ph + alpha * pa).ln())
            .sum())
    }
}

/// Convenience single-essay entry point; prefer [`Scorer`] for batches.
pub fn estimate_alpha(
    stream: &TokenStream,
    human: &TokenDistribution,
    llm: &TokenDistribution,
) -> Result<AlphaEstimate> {
    let pair =
        ReferencePair { version: REFERENCE_FORMAT_VERSION, human: human.clone(), llm: llm.clone() };
    Scorer::new(&pair, &DetectorConfig::default())?.estimate_alpha(stream)
}

/// One bin of the calibration table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationBin {
    pub true_alpha: f64,
    pub mean_alpha_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub n_docs: usize,
}

/// Settings for [`calibration_curve`].
#[derive(Debug, Clone, Copy)]
pub struct CalibrationSettings {
    pub docs_per_bin: usize,
    /// Target token length of each spliced document.
    pub doc_tokens: usize,
    pub seed: u64,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        CalibrationSettings { docs_per_bin: 150, doc_tokens: 450, seed: 7 }
    }
}

fn sentence_pool(essays: &[String]) -> Vec<Vec<String>> {
    let mut pool = Vec::new();
    for essay in essays {
        let stream = tokenize(essay);
        for bounds in &stream.sentence_bounds {
            let sentence: Vec<String> = stream.tokens[bounds.clone()].to_vec();
            if !sentence.is_empty() {
                pool.push(sentence);
            }
        }
    }
    pool
}

/// Splice one mixed document at `alpha` by token-count-proportional
/// sentence interleaving: at each step, draw from the LLM pool whenever the
/// running LLM token share is below target.
fn splice_document(
    human_pool: &[Vec<String>],
    llm_pool: &[Vec<String>],
    alpha: f64,
    target_tokens: usize,
    rng: &mut ChaCha8Rng,
) -> TokenStream {
    let mut tokens: Vec<String> = Vec::with_capacity(target_tokens);
    let mut bounds = Vec::new();
    let mut llm_tokens = 0usize;
    while tokens.len() < target_tokens {
        let take_llm = (llm_tokens as f64) < alpha * (tokens.len() as f64 + 1.0);
        let sentence = if take_llm {
            &llm_pool[rng.gen_range(0..llm_pool.len())]
        } else {
            &human_pool[rng.gen_range(0..human_pool.len())]
        };
        let start = tokens.len();
        tokens.extend(sentence.iter().cloned());
        bounds.push(start..tokens.len());
        if take_llm {
            llm_tokens += sentence.len();
        }
    }
    let raw = tokens.len() + bounds.len();
    TokenStream { tokens, sentence_bounds: bounds, raw_token_count: raw }
}

/// Mean estimated alpha with 95% CIs per true-alpha bin, on documents
/// spliced from held-out human and LLM essays.
///
/// The holdouts must be disjoint from the corpora the references were fit
/// on for the curve to measure generalization.
pub fn calibration_curve(
    scorer: &Scorer,
    holdout_human: &[String],
    holdout_llm: &[String],
    alphas: &[f64],
    settings: &CalibrationSettings,
) -> Result<Vec<CalibrationBin>> {
    if holdout_human.is_empty() || holdout_llm.is_empty() {
        return Err(Error::invalid("calibration requires nonempty holdout corpora"));
    }
    if settings.docs_per_bin < 2 {
        return Err(Error::invalid("calibration requires at least two documents per bin"));
    }
    let human_pool = sentence_pool(holdout_human);
    let llm_pool = sentence_pool(holdout_llm);
    if human_pool.is_empty() || llm_pool.is_empty() {
        return Err(Error::invalid("holdout corpora yielded no sentences"));
    }

    let mut bins = Vec::with_capacity(alphas.len());
    for (bin_idx, &alpha) in alphas.iter().enumerate() {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(format!("target alpha {alpha} outside [0, 1]")));
        }
        let estimates: Vec<f64> = (0..settings.docs_per_bin)
            .into_par_iter()
            .map(|doc_idx| {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    settings
                        .seed
                        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                        .wrapping_add((bin_idx as u64) << 32)
                        .wrapping_add(doc_idx as u64),
                );
                let doc =
                    splice_document(&human_pool, &llm_pool, alpha, settings.doc_tokens, &mut rng);
                scorer.estimate_alpha(&doc).map(|e| e.alpha_hat)
            })
            .collect::<Result<_>>()?;
        let n = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / n;
        let var = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0);
        let half = 1.96 * (var / n).sqrt();
        bins.push(CalibrationBin {
            true_alpha: alpha,
            mean_alpha_hat: mean,
            ci_lo: mean - half,
            ci_hi: mean + half,
            n_docs: estimates.len(),
        });
    }
    Ok(bins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn stream_of(words: &[&str]) -> TokenStream {
        TokenStream {
            tokens: words.iter().map(|s| s.to_string()).collect(),
            sentence_bounds: vec![0..words.len()],
            raw_token_count: words.len(),
        }
    }

    fn pair_from(human: &[String], llm: &[String], min_count: usize) -> ReferencePair {
        let config = DetectorConfig { min_count, ..DetectorConfig::default() };
        ReferencePair::fit(human, llm, &config).unwrap()
    }

    #[test]
    fn fit_reference_hand_example() {
        let essays = vec!["a a b".to_string()];
        let dist = fit_reference(&essays, 1.0, 1, SourceLabel::Human).unwrap();
        assert_eq!(dist.vocabulary, vec!["a".to_string(), "b".to_string()]);
        assert_relative_eq!(dist.probs[0], 3.0 / 6.0);
        assert_relative_eq!(dist.probs[1], 2.0 / 6.0);
        assert_relative_eq!(dist.oov_prob, 1.0 / 6.0);
        assert_relative_eq!(dist.total_mass(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn fit_reference_empty_corpus_errors() {
        assert!(fit_reference(&[], 0.5, 1, SourceLabel::Human).is_err());
    }

    #[test]
    fn identical_corpora_have_identical_digests() {
        let essays = vec!["the quick brown fox jumps".to_string()];
        let a = fit_reference(&essays, 0.5, 1, SourceLabel::Human).unwrap();
        let b = fit_reference(&essays, 0.5, 1, SourceLabel::Human).unwrap();
        assert_eq!(a.provenance, b.provenance);
        assert_eq!(a, b);
    }

    #[test]
    fn disjoint_corpora_differ_everywhere_on_shared_vocab() {
        let human = vec!["apple banana cherry apple banana".to_string()];
        let llm = vec!["delta epsilon zeta delta epsilon".to_string()];
        let pair = pair_from(&human, &llm, 1);
        for i in 0..pair.human.vocabulary.len() {
            assert!(pair.human.probs[i] != pair.llm.probs[i]);
        }
    }

    #[test]
    fn flat_likelihood_ties_to_zero() {
        // identical references: p_H(t) = p_A(t) for every token
        let essays = vec!["one two three one two three".to_string()];
        let pair = pair_from(&essays, &essays, 1);
        let scorer = Scorer::new(&pair, &DetectorConfig::default()).unwrap();
        let est = scorer.estimate_alpha(&stream_of(&["one", "two", "three"])).unwrap();
        assert_eq!(est.alpha_hat, 0.0);
        assert_eq!(est.category, UsageCategory::None);
        assert_relative_eq!(est.loglik_at_opt, est.loglik_at_zero);
    }

    #[test]
    fn increasing_likelihood_hits_one() {
        // single scored token with p_A > p_H: derivative positive everywhere
        let human = vec!["x ".repeat(9) + "t"];
        let llm = vec!["t ".repeat(3) + "x ".repeat(7).trim()];
        let pair = pair_from(&human, &llm, 1);
        let scorer = Scorer::new(&pair, &DetectorConfig::default()).unwrap();
        let est = scorer.estimate_alpha(&stream_of(&["t"])).unwrap();
        assert_eq!(est.alpha_hat, 1.0);
        assert!(est.loglik_at_opt >= est.loglik_at_zero);
    }

    #[test]
    fn interior_optimum_matches_grid_oracle() {
        let human = vec!["alpha beta gamma delta alpha beta alpha gamma".to_string()];
        let llm = vec!["omega psi chi phi omega psi omega chi".to_string()];
        let pair = pair_from(&human, &llm, 1);
        let scorer = Scorer::new(&pair, &DetectorConfig::default()).unwrap();
        let essay = stream_of(&["alpha", "beta", "omega", "gamma", "psi", "alpha"]);
        let est = scorer.estimate_alpha(&essay).unwrap();
        assert!(est.alpha_hat > 0.0 && est.alpha_hat < 1.0);
        let oracle = essaystat_testkit::grid_argmax(
            |a| scorer.loglik(&essay, a).unwrap(),
            200_001,
        );
        assert!((est.alpha_hat - oracle).abs() < 1e-4);
        // grid check of optimizer correctness
        for a in [0.0, 0.25, 0.5, 0.75, 1.0] {
            assert!(est.loglik_at_opt >= scorer.loglik(&essay, a).unwrap() - 1e-9);
        }
    }

    #[test]
    fn concavity_second_differences() {
        let human = vec!["red green blue yellow red green red blue".to_string()];
        let llm = vec!["cyan magenta black white cyan magenta cyan black".to_string()];
        let pair = pair_from(&human, &llm, 1);
        let scorer = Scorer::new(&pair, &DetectorConfig::default()).unwrap();
        let essay = stream_of(&["red", "cyan", "green", "magenta", "blue"]);
        let h = 1e-3;
        for i in 1..999 {
            let a = i as f64 / 1000.0;
            let second = scorer.loglik(&essay, a - h).unwrap()
                - 2.0 * scorer.loglik(&essay, a).unwrap()
                + scorer.loglik(&essay, a + h).unwrap();
            assert!(second <= 1e-9, "second difference {second} at {a}");
        }
    }

    #[test]
    fn categorize_boundaries() {
        let t = UsageThresholds::default();
        assert_eq!(categorize(0.0, &t), UsageCategory::None);
        assert_eq!(categorize(1e-9, &t), UsageCategory::Low);
        assert_eq!(categorize(0.07, &t), UsageCategory::Low);
        assert_eq!(categorize(0.0701, &t), UsageCategory::Medium);
        assert_eq!(categorize(0.13, &t), UsageCategory::Medium);
        assert_eq!(categorize(0.131, &t), UsageCategory::High);
    }

    #[test]
    fn tercile_order_statistics() {
        // 9 positive values on a uniform grid: thresholds at the 3rd and
        // 6th order statistics
        let values: Vec<f64> = (1..=9).map(|i| 0.03 + (i - 1) as f64 * 0.0225).collect();
        let t = tercile_thresholds(&values).unwrap();
        assert_relative_eq!(t.low_upper, values[2]);
        assert_relative_eq!(t.medium_upper, values[5]);
    }

    #[test]
    fn tercile_ignores_zeros_and_needs_three() {
        assert!(tercile_thresholds(&[0.0, 0.0, 0.1, 0.2]).is_err());
        let t = tercile_thresholds(&[0.0, 0.0, 0.05, 0.10, 0.15]).unwrap();
        assert_relative_eq!(t.low_upper, 0.05);
        assert_relative_eq!(t.medium_upper, 0.10);
    }

    #[test]
    fn tercile_degenerate_errors() {
        assert!(tercile_thresholds(&[0.1, 0.1, 0.1, 0.1]).is_err());
    }

    #[test]
    fn thresholds_validate_ordering() {
        assert!(UsageThresholds { low_upper: 0.2, medium_upper: 0.1 }.validate().is_err());
        assert!(UsageThresholds::default().validate().is_ok());
    }

    #[test]
    fn reference_pair_round_trips() {
        let human = vec!["apple banana cherry apple".to_string()];
        let llm = vec!["delta epsilon zeta delta".to_string()];
        let pair = pair_from(&human, &llm, 1);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("refs.json");
        pair.save(&path).unwrap();
        let back = ReferencePair::load(&path).unwrap();
        assert_eq!(pair, back);
    }

    #[test]
    fn empty_essay_errors() {
        let essays = vec!["one two".to_string()];
        let pair = pair_from(&essays, &essays, 1);
        let scorer = Scorer::new(&pair, &DetectorConfig::default()).unwrap();
        assert!(scorer.estimate_alpha(&stream_of(&[])).is_err());
    }

    #[test]
    fn token_subset_restricts_scoring() {
        let human = vec!["aa bb cc aa bb".to_string()];
        let llm = vec!["aa bb cc cc cc".to_string()];
        let config = DetectorConfig {
            min_count: 1,
            token_subset: Some(["aa".to_string(), "bb".to_string()].into_iter().collect()),
            ..DetectorConfig::default()
        };
        let pair = ReferencePair::fit(&human, &llm, &config).unwrap();
        let scorer = Scorer::new(&pair, &config).unwrap();
        let est = scorer.estimate_alpha(&stream_of(&["aa", "bb", "cc"])).unwrap();
        assert_eq!(est.n_scored_tokens, 2);
    }
}
