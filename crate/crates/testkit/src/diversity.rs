//! Step-by-step lexical diversity oracles.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Type-token ratio computed with an explicit loop.
pub fn ttr_brute(tokens: &[String]) -> f64 {
    let mut seen: Vec<&str> = Vec::new();
    for t in tokens {
        if !seen.iter().any(|s| *s == t.as_str()) {
            seen.push(t);
        }
    }
    seen.len() as f64 / tokens.len() as f64
}

/// Maas index (ln N - ln V) / (ln N)^2, recomputed from scratch.
pub fn maas_brute(tokens: &[String]) -> f64 {
    let n = tokens.len() as f64;
    let mut types: Vec<&str> = Vec::new();
    for t in tokens {
        if !types.iter().any(|s| *s == t.as_str()) {
            types.push(t);
        }
    }
    let v = types.len() as f64;
    (n.ln() - v.ln()) / (n.ln() * n.ln())
}

/// Yule's K = 10^4 * (sum_m m^2 V_m - N) / N^2 via an explicit frequency table.
pub fn yules_k_brute(tokens: &[String]) -> f64 {
    let mut freq: HashMap<&str, usize> = HashMap::new();
    for t in tokens {
        *freq.entry(t.as_str()).or_insert(0) += 1;
    }
    let mut by_m: HashMap<usize, usize> = HashMap::new();
    for &f in freq.values() {
        *by_m.entry(f).or_insert(0) += 1;
    }
    let n = tokens.len() as f64;
    let mut s = 0.0;
    for (m, vm) in by_m {
        s += (m * m * vm) as f64;
    }
    1e4 * (s - n) / (n * n)
}

/// One MTLD pass, written as a literal transcription of the factor-count
/// procedure: scan, count a factor whenever running TTR drops below the
/// threshold, then reset; the remainder contributes a partial factor
/// (1 - TTR_rem) / (1 - threshold). If the TTR never drops below the
/// threshold during the pass, the pass value is N by convention.
fn mtld_pass(tokens: &[String], threshold: f64) -> f64 {
    let n = tokens.len() as f64;
    let mut factors = 0usize;
    let mut window: Vec<&str> = Vec::new();
    for t in tokens {
        window.push(t);
        let mut types: Vec<&str> = Vec::new();
        for w in &window {
            if !types.contains(w) {
                types.push(w);
            }
        }
        let ttr = types.len() as f64 / window.len() as f64;
        if ttr < threshold {
            factors += 1;
            window.clear();
        }
    }
    if factors == 0 {
        return n;
    }
    let mut total = factors as f64;
    if !window.is_empty() {
        let mut types: Vec<&str> = Vec::new();
        for w in &window {
            if !types.contains(w) {
                types.push(w);
            }
        }
        let ttr = types.len() as f64 / window.len() as f64;
        total += (1.0 - ttr) / (1.0 - threshold);
    }
    n / total
}

/// Bidirectional MTLD: mean of the forward pass and the pass over the
/// reversed token list.
pub fn mtld_brute(tokens: &[String], threshold: f64) -> f64 {
    let forward = mtld_pass(tokens, threshold);
    let reversed: Vec<String> = tokens.iter().rev().cloned().collect();
    let backward = mtld_pass(&reversed, threshold);
    (forward + backward) / 2.0
}

/// Exact HD-D from the hypergeometric inclusion probability, computed with
/// a literal running product instead of factorials.
pub fn hdd_exact(tokens: &[String], sample_size: usize) -> f64 {
    let n = tokens.len();
    let mut freq: HashMap<&str, usize> = HashMap::new();
    for t in tokens {
        *freq.entry(t.as_str()).or_insert(0) += 1;
    }
    let mut sum = 0.0;
    for &f in freq.values() {
        // P(absent) = C(n-f, k) / C(n, k) = prod_{i=0..k-1} (n-f-i)/(n-i)
        let mut p_absent = 1.0;
        for i in 0..sample_size {
            let num = n as f64 - f as f64 - i as f64;
            let den = n as f64 - i as f64;
            if num <= 0.0 {
                p_absent = 0.0;
                break;
            }
            p_absent *= num / den;
        }
        sum += (1.0 - p_absent) / sample_size as f64;
    }
    sum * 100.0
}

/// Monte-Carlo HD-D: draw `draws` samples of `sample_size` tokens without
/// replacement and average the distinct-type count. E[distinct]/k * 100
/// equals the hypergeometric sum.
pub fn hdd_monte_carlo(tokens: &[String], sample_size: usize, draws: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx: Vec<usize> = (0..tokens.len()).collect();
    let mut total_distinct = 0usize;
    for _ in 0..draws {
        let sample: Vec<usize> = idx.choose_multiple(&mut rng, sample_size).cloned().collect();
        let mut types: Vec<&str> = Vec::new();
        for i in sample {
            let t = tokens[i].as_str();
            if !types.contains(&t) {
                types.push(t);
            }
        }
        total_distinct += types.len();
    }
    (total_distinct as f64 / draws as f64) / sample_size as f64 * 100.0
}
