//! Goodness-of-fit and homogeneity tests with asymptotic p-values.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::{gamma_ur, ln_gamma};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub df: Option<u32>,
}

const MIN_EXPECTED: f64 = 5.0;

pub fn poisson_pmf(k: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let k = k as f64;
    (-mean + k * mean.ln() - ln_gamma(k + 1.0)).exp()
}

fn chisq_sf(statistic: f64, df: u32) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    gamma_ur(f64::from(df) / 2.0, statistic / 2.0)
}

/// Chi-square goodness of fit of integer counts to Poisson(`mean`). Bins
/// grow from zero until each expects at least five counts; the last bin
/// takes the whole upper tail.
pub fn chisq_gof_poisson(counts: &[u64], mean: f64) -> Result<TestResult> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(Error::InvalidRange(format!("Poisson mean {mean} must be positive")));
    }
    let n = counts.len() as f64;
    let mut lows = Vec::new();
    let (mut lo, mut acc, mut cdf) = (0u64, 0.0, 0.0f64);
    for k in 0u64.. {
        let pk = poisson_pmf(k, mean);
        acc += n * pk;
        cdf += pk;
        if n * (1.0 - cdf).max(0.0) < MIN_EXPECTED {
            break;
        }
        if acc >= MIN_EXPECTED {
            lows.push(lo);
            lo = k + 1;
            acc = 0.0;
        }
    }
    lows.push(lo);
    if lows.len() < 2 {
        return Err(Error::Inconclusive(format!("{} samples cannot fill two bins", counts.len())));
    }

    let bin_of = |c: u64| lows.partition_point(|&l| l <= c) - 1;
    let mut observed = vec![0u64; lows.len()];
    for &c in counts {
        observed[bin_of(c)] += 1;
    }
    let mut statistic = 0.0;
    let mut below = 0.0f64;
    for (i, &l) in lows.iter().enumerate() {
        let mass = match lows.get(i + 1) {
            Some(&next) => (l..next).map(|k| poisson_pmf(k, mean)).sum::<f64>(),
            None => (1.0 - below).max(0.0),
        };
        below += mass;
        let e = n * mass;
        let o = observed[i] as f64;
        statistic += (o - e) * (o - e) / e;
    }
    let df = lows.len() as u32 - 1;
    Ok(TestResult { statistic, p_value: chisq_sf(statistic, df), df: Some(df) })
}

/// Survival function of the Kolmogorov distribution.
pub fn kolmogorov_sf(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < 1.18 {
        let c = std::f64::consts::PI.powi(2) / (8.0 * t * t);
        let mut sum = 0.0;
        for k in 1..=50 {
            let j = (2 * k - 1) as f64;
            let term = (-j * j * c).exp();
            sum += term;
            if term < 1e-16 {
                break;
            }
        }
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / t * sum).clamp(0.0, 1.0)
    } else {
        let mut sum = 0.0;
        for k in 1..=100 {
            let k = k as f64;
            let term = (-2.0 * k * k * t * t).exp();
            sum += if k as u64 % 2 == 1 { term } else { -term };
            if term < 1e-16 {
                break;
            }
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    let s = n_eff.sqrt();
    kolmogorov_sf((s + 0.12 + 0.11 / s) * d)
}

/// One-sample Kolmogorov-Smirnov test against Uniform(`lo`, `hi`).
pub fn ks_uniform(points: &[f64], lo: f64, hi: f64) -> Result<TestResult> {
    if points.is_empty() {
        return Err(Error::Inconclusive("no points".into()));
    }
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidRange(format!("empty interval ({lo}, {hi})")));
    }
    let mut f: Vec<f64> = points.iter().map(|&x| ((x - lo) / (hi - lo)).clamp(0.0, 1.0)).collect();
    f.sort_by(f64::total_cmp);
    let n = f.len() as f64;
    let d = f.iter().enumerate().map(|(i, &fi)| (fi - i as f64 / n).max((i + 1) as f64 / n - fi)).fold(0.0, f64::max);
    Ok(TestResult { statistic: d, p_value: ks_p_value(d, n), df: None })
}

/// Two-sample Kolmogorov-Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Inconclusive("empty sample".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(TestResult { statistic: d, p_value: ks_p_value(d, na * nb / (na + nb)), df: None })
}

/// Chi-square homogeneity test between two samples of categorical feature
/// vectors. Categories expecting fewer than five counts in either sample
/// are pooled together.
pub fn two_sample_chisq(a: &[Vec<u32>], b: &[Vec<u32>]) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Inconclusive("empty sample".into()));
    }
    let mut table: BTreeMap<&[u32], (u64, u64)> = BTreeMap::new();
    for v in a {
        table.entry(v).or_default().0 += 1;
    }
    for v in b {
        table.entry(v).or_default().1 += 1;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let smaller = na.min(nb) / (na + nb);

    let mut kept: Vec<(u64, u64)> = Vec::new();
    let mut pool = (0u64, 0u64);
    for &(ca, cb) in table.values() {
        if (ca + cb) as f64 * smaller < MIN_EXPECTED {
            pool.0 += ca;
            pool.1 += cb;
        } else {
            kept.push((ca, cb));
        }
    }
    if pool.0 + pool.1 > 0 {
        if (pool.0 + pool.1) as f64 * smaller >= MIN_EXPECTED || kept.is_empty() {
            kept.push(pool);
        } else {
            let smallest = (0..kept.len()).min_by_key(|&i| kept[i].0 + kept[i].1).expect("non-empty");
            kept[smallest].0 += pool.0;
            kept[smallest].1 += pool.1;
        }
    }
    if kept.len() < 2 {
        return Err(Error::Inconclusive("fewer than two categories after pooling".into()));
    }
    let total = na + nb;
    let mut statistic = 0.0;
    for &(ca, cb) in &kept {
        let t = (ca + cb) as f64;
        for (o, n) in [(ca as f64, na), (cb as f64, nb)] {
            let e = t * n / total;
            statistic += (o - e) * (o - e) / e;
        }
    }
    let df = kept.len() as u32 - 1;
    Ok(TestResult { statistic, p_value: chisq_sf(statistic, df), df: Some(df) })
}

/// Two-sided test of zero Pearson correlation, `z = r sqrt(n)`.
pub fn correlation_test(x: &[f64], y: &[f64]) -> Result<TestResult> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::Inconclusive("need at least three paired observations".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Inconclusive("constant sample".into()));
    }
    let r = sxy / (sxx * syy).sqrt();
    let z = r * n.sqrt();
    Ok(TestResult { statistic: r, p_value: erfc(z.abs() / std::f64::consts::SQRT_2), df: None })
}
