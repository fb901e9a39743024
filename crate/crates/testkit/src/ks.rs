//! One-sample Kolmogorov-Smirnov test against Uniform(0,1).

/// Two-sided KS p-value for the hypothesis that `samples` are U(0,1).
///
/// Uses the asymptotic Kolmogorov distribution with the Stephens small-sample
/// correction; adequate for the n >= 100 replication counts used in tests.
pub fn ks_uniform_p(samples: &[f64]) -> f64 {
    let n = samples.len();
    assert!(n > 0, "ks_uniform_p needs at least one sample");
    let mut xs: Vec<f64> = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, x) in xs.iter().enumerate() {
        let cdf = x.clamp(0.0, 1.0);
        let hi = (i as f64 + 1.0) / nf - cdf;
        let lo = cdf - i as f64 / nf;
        d = d.max(hi).max(lo);
    }
    let lambda = (nf.sqrt() + 0.12 + 0.11 / nf.sqrt()) * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        p += if k % 2 == 1 { 2.0 * term } else { -2.0 * term };
    }
    p.clamp(0.0, 1.0)
}
