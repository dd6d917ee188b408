//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line on the real
//! stdout, so the lines show up even when test output is captured.

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use bulletlab_cli::{preset, DEFAULT_ALPHA};
use bulletlab_core::model::label_mismatches;
use bulletlab_core::reversibility::*;
use bulletlab_core::verify::*;
use bulletlab_core::*;
use sha2::{Digest, Sha256};

fn params(name: &str) -> Parameter {
    preset(name, DEFAULT_ALPHA).unwrap().params
}

fn square() -> Rectangle {
    Rectangle::centered(1.0, 1.0).unwrap()
}

fn report(id: u32, title: &str, pass: bool, elapsed: Duration, detail: &str) {
    let line = format!(
        "[acceptance] criterion {id} {}: {title} ({:.2}s) {detail}\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(pass, "criterion {id} failed: {detail}");
}

#[test]
fn criterion_1_reverse_parameter_algebra() {
    let start = Instant::now();
    let tol = 1e-12;
    let mut failures = Vec::new();
    let nu = |n: f64| Some(Intensities::new(n, n).unwrap());
    let mut expect = |label: &str,
                      pair: std::result::Result<ReversePair, Inapplicable>,
                      want: Parameter,
                      law: Option<Intensities>| match pair {
        Ok(pair) => {
            let law_ok = match (pair.forward_law, law) {
                (Some(a), Some(b)) => (a.nu_h - b.nu_h).abs() <= tol && (a.nu_v - b.nu_v).abs() <= tol,
                _ => false,
            };
            if pair.reverse_params.max_abs_diff(&want) > tol || !law_ok {
                failures.push(format!("{label}: got {} {:?}", pair.reverse_params, pair.forward_law));
            }
        }
        Err(e) => failures.push(format!("{label}: {e}")),
    };
    expect("pi(pv)", corollary_pi(&params("pv"), tol), params("ph"), nu(1.0));
    expect("pi2(ph)", corollary_pi2(&params("ph"), tol), params("cbmc"), nu(1.0));
    expect("pi(loop-half)", corollary_pi(&params("loop-half"), tol), params("loop-half"), nu(2.0));
    expect("pi2(loop-half)", corollary_pi2(&params("loop-half"), tol), params("loop-half"), nu(2.0));

    let lp = params("loop");
    let inv = invariants_of(&lp);
    if (inv.a, inv.bv, inv.bh) != (0.0, 0.0, 0.0) {
        failures.push(format!("invariants(loop) = {inv:?}"));
    }
    if corollary_pi(&lp, tol).is_ok() || corollary_pi2(&lp, tol).is_ok() {
        failures.push("loop reverse unexpectedly constructed".into());
    }
    if !check_theorem_pi(&lp, &lp, 1.0, 1.0, tol).passed || !check_theorem_pi2(&lp, &lp, 1.0, tol).passed {
        failures.push("loop condition check failed".into());
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(1);
    report(1, "reverse-parameter maps", pass, elapsed, &failures.join("; "));
}

#[test]
fn criterion_2_pointwise_density_identity() {
    let start = Instant::now();
    let (pv, ph, cbmc, half, lp) = (params("pv"), params("ph"), params("cbmc"), params("loop-half"), params("loop"));
    let n = 1000;
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let cases: [(&str, bool, Parameter, Parameter, f64); 6] = [
        ("pi pv/ph", false, pv, ph, 1.0),
        ("pi loop-half", false, half, half, 2.0),
        ("pi loop", false, lp, lp, 1.0),
        ("pi2 ph/cbmc", true, ph, cbmc, 1.0),
        ("pi2 loop-half", true, half, half, 2.0),
        ("pi2 loop", true, lp, lp, 1.0),
    ];
    for (i, (label, quarter, p, pt, nu)) in cases.into_iter().enumerate() {
        let f = if quarter { verify_density_identity_pi2 } else { verify_density_identity_pi };
        let r = f(&p, &pt, nu, nu, &square(), n, 100 + i as u64, 1e-9).unwrap();
        worst = worst.max(r.max_abs_deviation.unwrap());
        if !r.passed || r.support_violations != Some(0) {
            failures.push(format!("{label}: max {:?}, violations {:?}", r.max_abs_deviation, r.support_violations));
        }
    }
    for (label, quarter) in [("pi pv/pv", false), ("pi2 pv/pv", true)] {
        let f = if quarter { verify_density_identity_pi2 } else { verify_density_identity_pi };
        let r = f(&pv, &pv, 1.0, 1.0, &square(), n, 200, 1e-9).unwrap();
        if r.passed {
            failures.push(format!("negative control {label} passed"));
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(30);
    report(
        2,
        "pointwise density identity",
        pass,
        elapsed,
        &format!("max deviation {worst:.3e} {}", failures.join("; ")),
    );
}

#[test]
fn criterion_3_structural_identities() {
    let start = Instant::now();
    let presets: Vec<_> = bulletlab_cli::registry(DEFAULT_ALPHA);
    let total = 10_000u64;
    let mut failures = Vec::new();
    for i in 0..total {
        let p = &presets[(i % presets.len() as u64) as usize];
        let side = 1.0 + (i % 4) as f64;
        let rect = Rectangle::new(0.0, 0.0, side, side * 0.75).unwrap();
        let u = build_diagram(&p.params, &p.default_law, &rect, &mut RngStream::substream(3, i), DEFAULT_MAX_EVENTS)
            .unwrap();
        let mut ok = validate_configuration(&u).is_empty() && label_mismatches(&u).unwrap().is_empty();
        let stats = extract_stats(&u).unwrap();
        ok &= stats.satisfies_balance();
        let skeleton = skeleton_of(&u).unwrap();
        for g in [SymmetryElement::Pi, SymmetryElement::Pi2] {
            let image = apply_symmetry(g, &u);
            ok &= skeleton_of(&image).unwrap() == skeleton.transformed(g);
            let image_stats = extract_stats(&image).unwrap();
            let mapped = stats_map_under_symmetry(g).apply(&stats);
            ok &= mapped.counts() == image_stats.counts() && (mapped.n, mapped.m) == (image_stats.n, image_stats.m);
        }
        if !ok {
            failures.push(format!("{} replicate {i}", p.name));
        }
    }
    let elapsed = start.elapsed();
    report(
        3,
        "structural identities",
        failures.is_empty(),
        elapsed,
        &format!(
            "{} of {total} diagrams failed {}",
            failures.len(),
            failures.iter().take(5).cloned().collect::<Vec<_>>().join(", ")
        ),
    );
}

#[test]
fn criterion_4_empty_probability() {
    let start = Instant::now();
    let unit = Rectangle::new(0.0, 0.0, 1.0, 1.0).unwrap();
    let mut details = Vec::new();
    let mut pass = true;
    for (name, nu, target) in [("loop-half", 2.0, (-4.0f64).exp()), ("loop", 1.0, (-3.0f64).exp())] {
        let r = verify_empty_probability(&params(name), nu, nu, &unit, 100_000, 4).unwrap();
        pass &= r.passed && (r.target.unwrap() - target).abs() < 1e-15;
        details.push(format!("{name}: {:.6} vs {:.6} (4 sigma {:.4})", r.observed.unwrap(), target, r.threshold));
    }
    let elapsed = start.elapsed();
    report(4, "empty-diagram probability", pass && elapsed < Duration::from_secs(60), elapsed, &details.join("; "));
}

#[test]
fn criterion_5_stationarity() {
    let start = Instant::now();
    let rect = Rectangle::new(0.0, 0.0, 2.0, 2.0).unwrap();
    let mut failures = Vec::new();
    for (name, nu) in [("loop", 1.0), ("loop-half", 2.0), ("cbmc", 1.0), ("pv", 1.0)] {
        let r = verify_stationarity(&params(name), nu, nu, &rect, (1.0, 1.0), 10_000, 1, 1e-3).unwrap();
        if !r.passed {
            failures.push(format!("{name}: {:?}", r.tests));
        }
    }
    let neg = verify_stationarity(&params("cbmc"), 1.0, 3.0, &rect, (1.0, 1.0), 10_000, 1, 1e-3).unwrap();
    if neg.passed {
        failures.push("negative control cbmc/PPP(1,3) passed".into());
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(300);
    report(5, "stationarity suites", pass, elapsed, &failures.join("; "));
}

#[test]
fn criterion_6_distributional_reversibility() {
    let start = Instant::now();
    let one = Intensities::new(1.0, 1.0).unwrap();
    let mut failures = Vec::new();
    let run = |g, p: &str, pt: &str| {
        verify_qr_distribution(g, &params(p), &params(pt), one, one, &square(), 10_000, 1, 1e-3).unwrap()
    };
    if !run(SymmetryElement::Pi, "pv", "ph").passed {
        failures.push("pi pv/ph failed".to_owned());
    }
    if !run(SymmetryElement::Pi2, "ph", "cbmc").passed {
        failures.push("pi2 ph/cbmc failed".to_owned());
    }
    if run(SymmetryElement::Pi, "pv", "pv").passed {
        failures.push("negative control pi pv/pv passed".to_owned());
    }
    let elapsed = start.elapsed();
    report(6, "distributional quasi-reversibility", failures.is_empty(), elapsed, &failures.join("; "));
}

#[test]
fn criterion_7_randomized_algebra_sweep() {
    let start = Instant::now();
    let tol = 1e-12;
    let mut rng = RngStream::new(7);
    let mut failures = 0;
    for _ in 0..1000 {
        let p = random_parameter_pi(&mut rng);
        let ok = corollary_pi(&p, tol).is_ok_and(|pair| {
            let nu = pair.forward_law.unwrap();
            check_theorem_pi(&p, &pair.reverse_params, nu.nu_v, nu.nu_h, tol).passed
        });
        failures += usize::from(!ok);

        let q = random_parameter_pi2(&mut rng);
        let ok = corollary_pi2(&q, tol).is_ok_and(|pair| {
            let nu = pair.forward_law.unwrap();
            check_theorem_pi2(&q, &pair.reverse_params, nu.nu_v, tol).passed
                && corollary_pi(&q, tol).is_ok_and(|half| {
                    let mu = half.forward_law.unwrap();
                    approx_eq(mu.nu_h, nu.nu_h, 1e-9) && approx_eq(mu.nu_v, nu.nu_v, 1e-9)
                })
        });
        failures += usize::from(!ok);
    }
    let elapsed = start.elapsed();
    let pass = failures == 0 && elapsed < Duration::from_secs(5);
    report(7, "randomized algebra sweep", pass, elapsed, &format!("{failures} of 2000 draws failed"));
}

fn invoke(dir: &Path, args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_bulletlab")).args(args).env("BULLETLAB_OUT_DIR", dir).output().unwrap();
    assert!(out.status.code().unwrap() <= 1, "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn criterion_8_reproducibility() {
    let start = Instant::now();
    let runs: Vec<tempfile::TempDir> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    let commands: [&[&str]; 5] = [
        &["simulate", "--preset", "loop", "--rect", "0,0,5,5", "--seed", "7", "--out", "d.json", "--svg", "d.svg"],
        &["verify", "density-pi2", "--p", "ph", "--n", "300", "--seed", "2"],
        &["verify", "stationarity", "--p", "cbmc", "--n", "500", "--seed", "2"],
        &["verify", "qr", "--p", "pv", "--g", "pi", "--n", "500", "--seed", "2"],
        &["verify", "empty", "--p", "loop-half", "--n", "2000", "--seed", "2"],
    ];
    let mut outputs: Vec<Vec<Vec<u8>>> = Vec::new();
    for dir in &runs {
        let mut o: Vec<Vec<u8>> = commands.iter().map(|c| invoke(dir.path(), c)).collect();
        o.push(std::fs::read(dir.path().join("d.json")).unwrap());
        o.push(std::fs::read(dir.path().join("d.svg")).unwrap());
        outputs.push(o);
    }
    let identical = outputs[0] == outputs[1];
    let elapsed = start.elapsed();
    let svg = outputs[0].last().unwrap();
    report(8, "byte-identical outputs", identical, elapsed, &format!("loop [0,5]^2 seed 7 svg sha256 {}", hex(svg)));
}
