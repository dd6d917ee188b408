//! Seeded Monte Carlo checks of the reversibility and stationarity results.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::log_density_from_stats;
use crate::error::{Error, Result};
use crate::model::{extract_stats, restrict, ConfigStats, Configuration, PointKind, Rectangle};
use crate::params::{Intensities, Parameter};
use crate::rng::RngStream;
use crate::sampler::{build_diagram, InitialLaw, DEFAULT_MAX_EVENTS};
use crate::stats::{chisq_gof_poisson, correlation_test, ks_two_sample, ks_uniform, two_sample_chisq, TestResult};
use crate::symmetry::{apply_symmetry, SymmetryElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    DensityIdentityPi,
    DensityIdentityPi2,
    Stationarity,
    QrDistribution,
    EmptyProbability,
}

/// One statistical test. `p_value` is `None` when the test was undefined
/// on the data and `note` says why; such tests do not affect the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NamedTest {
    pub name: String,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub kind: ReportKind,
    pub replicates: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_abs_deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_violations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tests: Vec<NamedTest>,
    pub threshold: f64,
    pub passed: bool,
}

impl VerificationReport {
    pub fn p_value(&self, name: &str) -> Option<f64> {
        self.tests.iter().find(|t| t.name == name).and_then(|t| t.p_value)
    }
}

fn named(name: &str, r: Result<TestResult>) -> Result<NamedTest> {
    match r {
        Ok(t) => {
            Ok(NamedTest { name: name.to_owned(), statistic: Some(t.statistic), p_value: Some(t.p_value), note: None })
        }
        Err(Error::Inconclusive(why)) => {
            Ok(NamedTest { name: name.to_owned(), statistic: None, p_value: None, note: Some(why) })
        }
        Err(e) => Err(e),
    }
}

fn all_above(tests: &[NamedTest], alpha: f64) -> bool {
    tests.iter().filter_map(|t| t.p_value).all(|p| p >= alpha)
}

/// Runs `f` on replicates `offset..offset + n`, each with its own substream.
/// Results come back in replicate order whatever the thread schedule.
fn replicate<T: Send>(
    seed: u64,
    offset: u64,
    n: u64,
    f: impl Fn(&mut RngStream) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    (offset..offset + n).into_par_iter().map(|i| f(&mut RngStream::substream(seed, i))).collect()
}

fn sample(p: &Parameter, nu: Intensities, rect: &Rectangle, rng: &mut RngStream) -> Result<Configuration> {
    build_diagram(p, &InitialLaw::Ppp(nu), rect, rng, DEFAULT_MAX_EVENTS)
}

fn check_count(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidRange("replicate count must be positive".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn density_identity(
    g: SymmetryElement,
    p: &Parameter,
    pt: &Parameter,
    nu: Intensities,
    rect: &Rectangle,
    n: u64,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    check_count(n)?;
    p.validate()?;
    pt.validate()?;
    let nu_rev = if g.swaps_axes() { nu.swapped() } else { nu };
    let g_rect = g.apply_rect(rect);
    let deltas = replicate(seed, 0, n, |rng| {
        let u = sample(p, nu, rect, rng)?;
        let forward = log_density_from_stats(&extract_stats(&u)?, rect, p, nu);
        let image = apply_symmetry(g, &u);
        let reverse = log_density_from_stats(&extract_stats(&image)?, &g_rect, pt, nu_rev);
        Ok((forward.finite_support && reverse.finite_support).then(|| (forward.value - reverse.value).abs()))
    })?;
    let violations = deltas.iter().filter(|d| d.is_none()).count() as u64;
    let max = deltas.iter().flatten().fold(0.0, |m: f64, &d| m.max(d));
    Ok(VerificationReport {
        kind: if g.swaps_axes() { ReportKind::DensityIdentityPi2 } else { ReportKind::DensityIdentityPi },
        replicates: n,
        seed,
        max_abs_deviation: Some(max),
        support_violations: Some(violations),
        observed: None,
        target: None,
        tests: Vec::new(),
        threshold: tol,
        passed: violations == 0 && max <= tol,
    })
}

/// Compares the log-density of each diagram under `(p, nu)` with that of
/// its half-turn image under `(pt, nu)`.
#[allow(clippy::too_many_arguments)]
pub fn verify_density_identity_pi(
    p: &Parameter,
    pt: &Parameter,
    nu_h: f64,
    nu_v: f64,
    rect: &Rectangle,
    n: u64,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    density_identity(SymmetryElement::Pi, p, pt, Intensities::new(nu_h, nu_v)?, rect, n, seed, tol)
}

/// Quarter-turn version; the image is scored with swapped intensities.
#[allow(clippy::too_many_arguments)]
pub fn verify_density_identity_pi2(
    p: &Parameter,
    pt: &Parameter,
    nu_h: f64,
    nu_v: f64,
    rect: &Rectangle,
    n: u64,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    density_identity(SymmetryElement::Pi2, p, pt, Intensities::new(nu_h, nu_v)?, rect, n, seed, tol)
}

/// Frequency of the empty diagram against `exp(-nuV w - nuH h - lambda0 w h)`,
/// accepted within four binomial standard deviations.
pub fn verify_empty_probability(
    p: &Parameter,
    nu_h: f64,
    nu_v: f64,
    rect: &Rectangle,
    n: u64,
    seed: u64,
) -> Result<VerificationReport> {
    check_count(n)?;
    let nu = Intensities::new(nu_h, nu_v)?;
    let empty = replicate(seed, 0, n, |rng| Ok(sample(p, nu, rect, rng)?.is_empty()))?;
    let freq = empty.iter().filter(|&&e| e).count() as f64 / n as f64;
    let (w, h) = (rect.width(), rect.height());
    let target = (-nu_v * w - nu_h * h - p.lambda0 * w * h).exp();
    let sigma = (target * (1.0 - target) / n as f64).sqrt();
    let threshold = 4.0 * sigma;
    Ok(VerificationReport {
        kind: ReportKind::EmptyProbability,
        replicates: n,
        seed,
        max_abs_deviation: None,
        support_violations: None,
        observed: Some(freq),
        target: Some(target),
        tests: Vec::new(),
        threshold,
        passed: (freq - target).abs() <= threshold,
    })
}

fn compare_stats(a: &[ConfigStats], b: &[ConfigStats]) -> Result<Vec<NamedTest>> {
    let fa: Vec<Vec<u32>> = a.iter().map(ConfigStats::feature_vector).collect();
    let fb: Vec<Vec<u32>> = b.iter().map(ConfigStats::feature_vector).collect();
    let lv = |s: &[ConfigStats]| s.iter().map(|x| x.lv).collect::<Vec<_>>();
    let lh = |s: &[ConfigStats]| s.iter().map(|x| x.lh).collect::<Vec<_>>();
    Ok(vec![
        named("counts-chisq", two_sample_chisq(&fa, &fb))?,
        named("lv-ks", ks_two_sample(&lv(a), &lv(b)))?,
        named("lh-ks", ks_two_sample(&lh(a), &lh(b)))?,
    ])
}

/// Tests two consequences of stationarity of `PPP(nuH, nuV)` on the corner
/// `[x0 + dx, x1] x [y0 + dy, y1]` of `rect`: the entry trace on its lower
/// and left edges is the product of Poisson processes, and the restricted
/// diagram has the law of a fresh diagram on that corner.
#[allow(clippy::too_many_arguments)]
pub fn verify_stationarity(
    p: &Parameter,
    nu_h: f64,
    nu_v: f64,
    rect: &Rectangle,
    shift: (f64, f64),
    n: u64,
    seed: u64,
    alpha: f64,
) -> Result<VerificationReport> {
    check_count(n)?;
    let nu = Intensities::new(nu_h, nu_v)?;
    let (dx, dy) = shift;
    if !(dx > 0.0 && dy > 0.0 && dx < rect.width() && dy < rect.height()) {
        return Err(Error::InvalidRange(format!("shift ({dx}, {dy}) must lie strictly inside {rect}")));
    }
    let sub = Rectangle::new(rect.x0() + dx, rect.y0() + dy, rect.x1(), rect.y1())?;

    struct Trace {
        xs: Vec<f64>,
        ys: Vec<f64>,
        stats: ConfigStats,
    }
    let traces = replicate(seed, 0, n, |rng| {
        let r = restrict(&sample(p, nu, rect, rng)?, sub)?;
        let xs = r.verticals().filter(|s| s.lo_kind == PointKind::VE).map(|s| s.anchor).collect();
        let ys = r.horizontals().filter(|s| s.lo_kind == PointKind::HE).map(|s| s.anchor).collect();
        Ok(Trace { xs, ys, stats: extract_stats(&r)? })
    })?;
    let fresh = replicate(seed, n, n, |rng| extract_stats(&sample(p, nu, &sub, rng)?))?;

    let cx: Vec<u64> = traces.iter().map(|t| t.xs.len() as u64).collect();
    let cy: Vec<u64> = traces.iter().map(|t| t.ys.len() as u64).collect();
    let all_x: Vec<f64> = traces.iter().flat_map(|t| t.xs.iter().copied()).collect();
    let all_y: Vec<f64> = traces.iter().flat_map(|t| t.ys.iter().copied()).collect();
    let as_f64 = |c: &[u64]| c.iter().map(|&k| k as f64).collect::<Vec<_>>();

    let poisson = |c: &[u64], mean: f64| {
        if mean > 0.0 {
            chisq_gof_poisson(c, mean)
        } else if c.iter().all(|&k| k == 0) {
            Err(Error::Inconclusive("no entries expected or seen".into()))
        } else {
            Ok(TestResult { statistic: f64::INFINITY, p_value: 0.0, df: None })
        }
    };
    let mut tests = vec![
        named("bottom-count-poisson", poisson(&cx, nu_v * sub.width()))?,
        named("left-count-poisson", poisson(&cy, nu_h * sub.height()))?,
        named("bottom-position-ks", ks_uniform(&all_x, sub.x0(), sub.x1()))?,
        named("left-position-ks", ks_uniform(&all_y, sub.y0(), sub.y1()))?,
        named("count-correlation", correlation_test(&as_f64(&cx), &as_f64(&cy)))?,
    ];
    let restricted: Vec<ConfigStats> = traces.into_iter().map(|t| t.stats).collect();
    tests.extend(compare_stats(&restricted, &fresh)?);

    Ok(VerificationReport {
        kind: ReportKind::Stationarity,
        replicates: n,
        seed,
        max_abs_deviation: None,
        support_violations: None,
        observed: None,
        target: None,
        passed: all_above(&tests, alpha),
        tests,
        threshold: alpha,
    })
}

/// Two-sample comparison of `g` applied to diagrams of `(p, forward_nu)`
/// with diagrams of `(pt, reverse_nu)` on the image rectangle.
#[allow(clippy::too_many_arguments)]
pub fn verify_qr_distribution(
    g: SymmetryElement,
    p: &Parameter,
    pt: &Parameter,
    forward_nu: Intensities,
    reverse_nu: Intensities,
    rect: &Rectangle,
    n: u64,
    seed: u64,
    alpha: f64,
) -> Result<VerificationReport> {
    check_count(n)?;
    let g_rect = g.apply_rect(rect);
    let images = replicate(seed, 0, n, |rng| extract_stats(&apply_symmetry(g, &sample(p, forward_nu, rect, rng)?)))?;
    let reverse = replicate(seed, n, n, |rng| extract_stats(&sample(pt, reverse_nu, &g_rect, rng)?))?;
    let tests = compare_stats(&images, &reverse)?;
    Ok(VerificationReport {
        kind: ReportKind::QrDistribution,
        replicates: n,
        seed,
        max_abs_deviation: None,
        support_violations: None,
        observed: None,
        target: None,
        passed: all_above(&tests, alpha),
        tests,
        threshold: alpha,
    })
}
