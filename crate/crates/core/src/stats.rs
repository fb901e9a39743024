//! Core inference engine: logistic regression via IRLS, OLS, Wald, t, and
//! chi-square tests, and Table-style group descriptives.
//!
//! Standard errors are classical (model-based); p-values for logit Wald
//! statistics use the normal approximation, OLS uses Student's t. Odds
//! ratio confidence bounds are exactly `exp(coef -/+ 1.96 * se)`.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};
use crate::frame::{build_design, Design, Frame, ModelSpec};

pub use crate::frame::Term;

/// Multiplier for 95% intervals.
pub const CI_Z: f64 = 1.96;

/// Significance stars used by every table emitter.
pub fn stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

fn normal_two_sided_p(z: f64) -> f64 {
    let n = Normal::new(0.0, 1.0).expect("standard normal");
    2.0 * (1.0 - n.cdf(z.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Logit,
    Ols,
}

/// One fitted coefficient with its inference columns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefRow {
    pub name: String,
    pub coef: f64,
    pub se: f64,
    pub z: f64,
    pub p: f64,
    pub odds_ratio: Option<f64>,
    pub or_ci: Option<(f64, f64)>,
}

/// A fitted GLM: coefficients, covariance, and fit diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFit {
    pub kind: ModelKind,
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    /// Row-major (p x p) covariance of the coefficients.
    pub covariance: Vec<Vec<f64>>,
    pub std_errors: Vec<f64>,
    pub z_values: Vec<f64>,
    pub p_values: Vec<f64>,
    /// exp(coef); logit fits only.
    pub odds_ratios: Option<Vec<f64>>,
    /// exp(coef -/+ 1.96 se); logit fits only.
    pub or_ci: Option<Vec<(f64, f64)>>,
    pub log_likelihood: f64,
    pub null_log_likelihood: f64,
    /// McFadden pseudo-R^2 for logit; plain R^2 for OLS.
    pub pseudo_r2: f64,
    pub n_used: usize,
    pub n_dropped: usize,
    pub converged: bool,
    pub iterations: usize,
}

impl ModelFit {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coef(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.coefficients[i])
    }

    pub fn se(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.std_errors[i])
    }

    pub fn cov(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.index_of(a)?;
        let j = self.index_of(b)?;
        Some(self.covariance[i][j])
    }

    pub fn row(&self, name: &str) -> Option<CoefRow> {
        let i = self.index_of(name)?;
        Some(CoefRow {
            name: self.names[i].clone(),
            coef: self.coefficients[i],
            se: self.std_errors[i],
            z: self.z_values[i],
            p: self.p_values[i],
            odds_ratio: self.odds_ratios.as_ref().map(|v| v[i]),
            or_ci: self.or_ci.as_ref().map(|v| v[i]),
        })
    }

    pub fn rows(&self) -> Vec<CoefRow> {
        self.names
            .iter()
            .map(|n| self.row(n).expect("name from self"))
            .collect()
    }

    pub fn covariance_matrix(&self) -> DMatrix<f64> {
        let p = self.names.len();
        DMatrix::from_fn(p, p, |i, j| self.covariance[i][j])
    }
}

/// Result of a single hypothesis test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub df: f64,
    pub p_value: f64,
    /// Cohen's d where applicable.
    pub effect_size: Option<f64>,
}

/// IRLS controls.
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Convergence threshold on the absolute deviance change.
    pub deviance_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { max_iterations: 100, deviance_tol: 1e-8 }
    }
}

/// Identify linearly dependent design columns by modified Gram-Schmidt.
fn dependent_columns(x: &DMatrix<f64>, names: &[String]) -> Vec<String> {
    let p = x.ncols();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut offenders = Vec::new();
    for j in 0..p {
        let col = x.column(j).into_owned();
        let norm0 = col.norm();
        if norm0 == 0.0 {
            offenders.push(names[j].clone());
            continue;
        }
        let mut v = col;
        for b in &basis {
            let proj = b.dot(&v);
            v -= b * proj;
        }
        // second pass for numerical safety
        for b in &basis {
            let proj = b.dot(&v);
            v -= b * proj;
        }
        if v.norm() <= 1e-8 * norm0 {
            offenders.push(names[j].clone());
        } else {
            let n = v.norm();
            basis.push(v / n);
        }
    }
    offenders
}

fn check_full_rank(design: &Design) -> Result<()> {
    let offenders = dependent_columns(&design.x, &design.names);
    if offenders.is_empty() {
        Ok(())
    } else {
        Err(Error::RankDeficient { columns: offenders })
    }
}

fn bernoulli_loglik(y: &DVector<f64>, mu: &DVector<f64>) -> f64 {
    let mut ll = 0.0;
    for i in 0..y.len() {
        let m = mu[i].clamp(1e-12, 1.0 - 1e-12);
        ll += y[i] * m.ln() + (1.0 - y[i]) * (1.0 - m).ln();
    }
    ll
}

/// Fit a logistic regression by iteratively reweighted least squares.
///
/// Converges on `|deviance change| < 1e-8` (default). Errors on rank
/// deficiency (naming the dependent columns), non-convergence, and
/// suspected perfect separation (|coef| > 15 with an exploding SE).
pub fn fit_logit(frame: &Frame, spec: &ModelSpec) -> Result<ModelFit> {
    fit_logit_with(frame, spec, FitOptions::default())
}

pub fn fit_logit_with(frame: &Frame, spec: &ModelSpec, opts: FitOptions) -> Result<ModelFit> {
    let design = build_design(frame, spec)?;
    let y = &design.y;
    let x = &design.x;
    let (n, p) = (x.nrows(), x.ncols());
    if n <= p {
        return Err(Error::invalid(format!(
            "need more observations ({n}) than parameters ({p})"
        )));
    }
    for v in y.iter() {
        if *v != 0.0 && *v != 1.0 {
            return Err(Error::invalid("logit outcome must be binary (0/1)"));
        }
    }
    check_full_rank(&design)?;

    let ybar = y.mean().clamp(1e-10, 1.0 - 1e-10);
    let mut beta = DVector::zeros(p);
    beta[0] = (ybar / (1.0 - ybar)).ln();

    let mut mu = DVector::zeros(n);
    let mut weights = DVector::zeros(n);
    let mut deviance = f64::INFINITY;
    let mut iterations = 0;
    let mut last_change = f64::INFINITY;
    let mut converged = false;

    while iterations < opts.max_iterations {
        iterations += 1;
        let eta = x * &beta;
        for i in 0..n {
            let e = eta[i].clamp(-30.0, 30.0);
            let m = 1.0 / (1.0 + (-e).exp());
            mu[i] = m;
            weights[i] = (m * (1.0 - m)).max(1e-10);
        }
        // working response z = eta + (y - mu) / w
        let mut z = DVector::zeros(n);
        for i in 0..n {
            z[i] = eta[i].clamp(-30.0, 30.0) + (y[i] - mu[i]) / weights[i];
        }
        let xtw = weighted_transpose(x, &weights);
        let xtwx = &xtw * x;
        let xtwz = &xtw * &z;
        let chol = Cholesky::new(xtwx).ok_or_else(|| Error::RankDeficient {
            columns: vec!["weighted cross-product not positive definite".into()],
        })?;
        beta = chol.solve(&xtwz);

        let eta = x * &beta;
        for i in 0..n {
            let e = eta[i].clamp(-30.0, 30.0);
            mu[i] = 1.0 / (1.0 + (-e).exp());
        }
        let new_deviance = -2.0 * bernoulli_loglik(y, &mu);
        last_change = (deviance - new_deviance).abs();
        deviance = new_deviance;
        if last_change < opts.deviance_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged { iterations, last_change });
    }

    for i in 0..n {
        weights[i] = (mu[i] * (1.0 - mu[i])).max(1e-10);
    }
    let xtw = weighted_transpose(x, &weights);
    let info = &xtw * x;
    let cov = Cholesky::new(info)
        .ok_or_else(|| Error::RankDeficient {
            columns: vec!["information matrix not positive definite".into()],
        })?
        .inverse();

    let se: Vec<f64> = (0..p).map(|j| cov[(j, j)].max(0.0).sqrt()).collect();

    let separated: Vec<String> = (0..p)
        .filter(|&j| beta[j].abs() > 15.0 && se[j] > 10.0)
        .map(|j| design.names[j].clone())
        .collect();
    if !separated.is_empty() {
        return Err(Error::Separation { columns: separated });
    }

    let ll = bernoulli_loglik(y, &mu);
    let ll0 = n as f64 * (ybar * ybar.ln() + (1.0 - ybar) * (1.0 - ybar).ln());

    let z_values: Vec<f64> = (0..p).map(|j| beta[j] / se[j]).collect();
    let p_values: Vec<f64> = z_values.iter().map(|&z| normal_two_sided_p(z)).collect();
    let odds_ratios: Vec<f64> = (0..p).map(|j| beta[j].exp()).collect();
    let or_ci: Vec<(f64, f64)> = (0..p)
        .map(|j| {
            (
                (beta[j] - CI_Z * se[j]).exp(),
                (beta[j] + CI_Z * se[j]).exp(),
            )
        })
        .collect();

    Ok(ModelFit {
        kind: ModelKind::Logit,
        names: design.names,
        coefficients: beta.iter().copied().collect(),
        covariance: (0..p)
            .map(|i| (0..p).map(|j| cov[(i, j)]).collect())
            .collect(),
        std_errors: se,
        z_values,
        p_values,
        odds_ratios: Some(odds_ratios),
        or_ci: Some(or_ci),
        log_likelihood: ll,
        null_log_likelihood: ll0,
        pseudo_r2: 1.0 - ll / ll0,
        n_used: n,
        n_dropped: design.n_dropped,
        converged,
        iterations,
    })
}

fn weighted_transpose(x: &DMatrix<f64>, w: &DVector<f64>) -> DMatrix<f64> {
    let mut xt = x.transpose();
    for (j, mut col) in xt.column_iter_mut().enumerate() {
        col *= w[j];
    }
    xt
}

/// Ordinary least squares with classical standard errors.
pub fn fit_ols(frame: &Frame, spec: &ModelSpec) -> Result<ModelFit> {
    let design = build_design(frame, spec)?;
    let y = &design.y;
    let x = &design.x;
    let (n, p) = (x.nrows(), x.ncols());
    if n <= p {
        return Err(Error::invalid(format!(
            "need more observations ({n}) than parameters ({p})"
        )));
    }
    check_full_rank(&design)?;

    let xtx = x.transpose() * x;
    let xty = x.transpose() * y;
    let chol = Cholesky::new(xtx).ok_or_else(|| Error::RankDeficient {
        columns: vec!["cross-product not positive definite".into()],
    })?;
    let beta = chol.solve(&xty);
    let fitted = x * &beta;
    let resid = y - &fitted;
    let rss: f64 = resid.iter().map(|r| r * r).sum();
    let sigma2 = rss / (n - p) as f64;
    let cov = chol.inverse() * sigma2;

    let se: Vec<f64> = (0..p).map(|j| cov[(j, j)].max(0.0).sqrt()).collect();
    let t_values: Vec<f64> = (0..p)
        .map(|j| if se[j] > 0.0 { beta[j] / se[j] } else { f64::INFINITY })
        .collect();
    let df = (n - p) as f64;
    let tdist = StudentsT::new(0.0, 1.0, df)
        .map_err(|e| Error::invalid(format!("t distribution: {e}")))?;
    let p_values: Vec<f64> = t_values
        .iter()
        .map(|&t| {
            if t.is_finite() {
                2.0 * (1.0 - tdist.cdf(t.abs()))
            } else {
                0.0
            }
        })
        .collect();

    let ybar = y.mean();
    let tss: f64 = y.iter().map(|v| (v - ybar) * (v - ybar)).sum();
    let r2 = if tss > 0.0 { 1.0 - rss / tss } else { 0.0 };
    // Gaussian log-likelihood at the MLE variance
    let sigma2_mle = (rss / n as f64).max(1e-300);
    let ll = -0.5 * n as f64 * ((2.0 * std::f64::consts::PI * sigma2_mle).ln() + 1.0);
    let s20 = (tss / n as f64).max(1e-300);
    let ll0 = -0.5 * n as f64 * ((2.0 * std::f64::consts::PI * s20).ln() + 1.0);

    Ok(ModelFit {
        kind: ModelKind::Ols,
        names: design.names,
        coefficients: beta.iter().copied().collect(),
        covariance: (0..p)
            .map(|i| (0..p).map(|j| cov[(i, j)]).collect())
            .collect(),
        std_errors: se,
        z_values: t_values,
        p_values,
        odds_ratios: None,
        or_ci: None,
        log_likelihood: ll,
        null_log_likelihood: ll0,
        pseudo_r2: r2,
        n_used: n,
        n_dropped: design.n_dropped,
        converged: true,
        iterations: 1,
    })
}

/// Joint Wald test that the named coefficients are simultaneously zero.
pub fn wald_joint(fit: &ModelFit, coef_subset: &[&str]) -> Result<TestResult> {
    if coef_subset.is_empty() {
        return Err(Error::invalid("wald_joint needs a nonempty subset"));
    }
    let idx: Vec<usize> = coef_subset
        .iter()
        .map(|name| {
            fit.index_of(name)
                .ok_or_else(|| Error::invalid(format!("no coefficient named '{name}'")))
        })
        .collect::<Result<_>>()?;
    let k = idx.len();
    let b = DVector::from_fn(k, |i, _| fit.coefficients[idx[i]]);
    let v = DMatrix::from_fn(k, k, |i, j| fit.covariance[idx[i]][idx[j]]);
    let chol = Cholesky::new(v).ok_or_else(|| {
        Error::invalid("sub-covariance matrix is singular in wald_joint")
    })?;
    let stat = b.dot(&chol.solve(&b));
    let chi = ChiSquared::new(k as f64)
        .map_err(|e| Error::invalid(format!("chi-square distribution: {e}")))?;
    Ok(TestResult {
        statistic: stat,
        df: k as f64,
        p_value: 1.0 - chi.cdf(stat),
        effect_size: None,
    })
}

fn mean_and_ss(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    (mean, ss)
}

/// Pooled-variance independent-samples t test with Cohen's d.
///
/// Degrees of freedom are n1 + n2 - 2.
pub fn two_sample_t(x: &[f64], y: &[f64]) -> Result<TestResult> {
    if x.len() < 2 || y.len() < 2 {
        return Err(Error::invalid("two_sample_t requires at least two values per group"));
    }
    let (n1, n2) = (x.len() as f64, y.len() as f64);
    let (m1, ss1) = mean_and_ss(x);
    let (m2, ss2) = mean_and_ss(y);
    let df = n1 + n2 - 2.0;
    let pooled_var = (ss1 + ss2) / df;
    if pooled_var <= 0.0 {
        return Err(Error::invalid("two_sample_t: pooled variance is zero"));
    }
    let se = (pooled_var * (1.0 / n1 + 1.0 / n2)).sqrt();
    let t = (m1 - m2) / se;
    let tdist = StudentsT::new(0.0, 1.0, df)
        .map_err(|e| Error::invalid(format!("t distribution: {e}")))?;
    let p = 2.0 * (1.0 - tdist.cdf(t.abs()));
    let d = (m1 - m2) / pooled_var.sqrt();
    Ok(TestResult { statistic: t, df, p_value: p, effect_size: Some(d) })
}

/// Pearson chi-square test of independence on a contingency table of counts.
pub fn chi_square_independence(table: &[Vec<f64>]) -> Result<TestResult> {
    let r = table.len();
    if r < 2 || table[0].len() < 2 {
        return Err(Error::invalid("chi-square table must be at least 2x2"));
    }
    let c = table[0].len();
    if table.iter().any(|row| row.len() != c) {
        return Err(Error::invalid("chi-square table rows have unequal lengths"));
    }
    let row_sums: Vec<f64> = table.iter().map(|row| row.iter().sum()).collect();
    let col_sums: Vec<f64> = (0..c).map(|j| table.iter().map(|row| row[j]).sum()).collect();
    let total: f64 = row_sums.iter().sum();
    if row_sums.iter().chain(col_sums.iter()).any(|&s| s <= 0.0) {
        return Err(Error::invalid("chi-square table has a zero marginal"));
    }
    let mut stat = 0.0;
    for i in 0..r {
        for j in 0..c {
            let expected = row_sums[i] * col_sums[j] / total;
            let dev = table[i][j] - expected;
            stat += dev * dev / expected;
        }
    }
    let df = ((r - 1) * (c - 1)) as f64;
    let chi = ChiSquared::new(df)
        .map_err(|e| Error::invalid(format!("chi-square distribution: {e}")))?;
    Ok(TestResult { statistic: stat, df, p_value: 1.0 - chi.cdf(stat), effect_size: None })
}

/// One row of a group-comparison table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DescriptiveRow {
    pub label: String,
    pub mean_a: f64,
    pub sd_a: f64,
    pub mean_b: f64,
    pub sd_b: f64,
    /// mean_b - mean_a.
    pub diff: f64,
    /// Percentage difference relative to group A.
    pub pct_diff: f64,
    pub t_stat: f64,
    pub p_value: f64,
}

/// Mean (SD) comparison of features between two groups, with percentage
/// differences relative to the first group and pooled t statistics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDescriptives {
    pub group_a: String,
    pub group_b: String,
    pub rows: Vec<DescriptiveRow>,
    pub n_a: usize,
    pub n_b: usize,
}

/// Compare per-feature value vectors between two groups.
///
/// `features_a[k]` and `features_b[k]` hold the k-th feature's values for
/// each group; `labels[k]` names it.
pub fn group_descriptives(
    group_a: &str,
    features_a: &[Vec<f64>],
    group_b: &str,
    features_b: &[Vec<f64>],
    labels: &[String],
) -> Result<GroupDescriptives> {
    if features_a.len() != labels.len() || features_b.len() != labels.len() {
        return Err(Error::invalid("group_descriptives: feature/label count mismatch"));
    }
    if features_a.iter().any(|v| v.is_empty()) || features_b.iter().any(|v| v.is_empty()) {
        return Err(Error::invalid("group_descriptives: empty group"));
    }
    let mut rows = Vec::with_capacity(labels.len());
    for k in 0..labels.len() {
        let a = &features_a[k];
        let b = &features_b[k];
        let (ma, ssa) = mean_and_ss(a);
        let (mb, ssb) = mean_and_ss(b);
        let sda = (ssa / (a.len() as f64 - 1.0)).sqrt();
        let sdb = (ssb / (b.len() as f64 - 1.0)).sqrt();
        let (t, p) = match two_sample_t(b, a) {
            Ok(t) => (t.statistic, t.p_value),
            Err(_) => (0.0, 1.0),
        };
        rows.push(DescriptiveRow {
            label: labels[k].clone(),
            mean_a: ma,
            sd_a: sda,
            mean_b: mb,
            sd_b: sdb,
            diff: mb - ma,
            pct_diff: if ma != 0.0 { (mb - ma) / ma * 100.0 } else { f64::NAN },
            t_stat: t,
            p_value: p,
        });
    }
    Ok(GroupDescriptives {
        group_a: group_a.to_string(),
        group_b: group_b.to_string(),
        rows,
        n_a: features_a[0].len(),
        n_b: features_b[0].len(),
    })
}
