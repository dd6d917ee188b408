use std::path::Path;
use std::process::Command;

use bulletlab_cli::*;
use bulletlab_core::*;
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bulletlab"))
}

fn run_in(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).env("BULLETLAB_OUT_DIR", dir).current_dir(dir).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn preset_registry_values() {
    let expected: [(&str, [f64; 8], f64); 7] = [
        ("cbmc", [0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0], 1.0),
        ("loop-half", [0.0, 1.0, 1.0, 0.0, 0.0, 0.5, 0.5, 0.0], 2.0),
        ("loop", [1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0], 1.0),
        ("hammersley", [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0], 1.0),
        ("bggs", [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.25, 0.75], 1.0),
        ("pv", [0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0], 1.0),
        ("ph", [0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0], 1.0),
    ];
    let reg = registry(DEFAULT_ALPHA);
    assert_eq!(reg.len(), expected.len());
    for (p, (name, t, nu)) in reg.iter().zip(expected) {
        assert_eq!(p.name, name);
        assert_eq!(p.params.as_tuple(), t);
        assert_eq!(p.default_law, InitialLaw::ppp(nu, nu).unwrap());
    }
}

#[test]
fn reverse_commands() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run_in(dir.path(), &["reverse", "--preset", "pv", "--g", "pi"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let ph: Parameter = serde_json::from_value(v["reverseParams"].clone()).unwrap();
    assert_eq!(ph, preset("ph", DEFAULT_ALPHA).unwrap().params);
    assert_eq!((v["forwardLaw"]["nuH"].as_f64(), v["forwardLaw"]["nuV"].as_f64()), (Some(1.0), Some(1.0)));

    let (_, out, _) = run_in(dir.path(), &["reverse", "--preset", "ph", "--g", "pi2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let cbmc: Parameter = serde_json::from_value(v["reverseParams"].clone()).unwrap();
    assert_eq!(cbmc, preset("cbmc", DEFAULT_ALPHA).unwrap().params);
}

#[test]
fn document_commands_match_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run_in(
        dir.path(),
        &["simulate", "--preset", "loop", "--rect", "0,0,3,3", "--seed", "5", "--out", "d.json", "--svg", "d.svg"],
    );
    assert_eq!(code, 0);
    let doc = decode_diagram(&std::fs::read(dir.path().join("d.json")).unwrap()).unwrap();
    let u = doc.configuration();
    let p = preset("loop", DEFAULT_ALPHA).unwrap();
    let direct = build_diagram(
        &p.params,
        &p.default_law,
        &Rectangle::new(0.0, 0.0, 3.0, 3.0).unwrap(),
        &mut RngStream::new(5),
        DEFAULT_MAX_EVENTS,
    )
    .unwrap();
    assert_eq!(u, direct);

    let (_, out, _) = run_in(dir.path(), &["stats", "d.json"]);
    assert_eq!(serde_json::from_str::<ConfigStats>(&out).unwrap(), extract_stats(&u).unwrap());

    let (_, out, _) = run_in(dir.path(), &["density", "d.json"]);
    assert_eq!(serde_json::from_str::<LogDensity>(&out).unwrap(), log_density(&u, &p.params, &p.default_law).unwrap());

    let (_, out, _) = run_in(dir.path(), &["render", "d.json"]);
    assert_eq!(out, std::fs::read_to_string(dir.path().join("d.svg")).unwrap());
    assert_eq!(out, render_svg(&u, &SvgStyle::default()).unwrap());
}

#[test]
fn broken_documents_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["simulate", "--preset", "cbmc", "--rect", "0,0,2,2", "--out", "d.json"]);
    let text = std::fs::read_to_string(dir.path().join("d.json")).unwrap();
    std::fs::write(dir.path().join("t.json"), &text[..text.len() / 2]).unwrap();
    let (code, _, err) = run_in(dir.path(), &["stats", "t.json"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    assert_eq!(run_in(dir.path(), &["stats", "missing.json"]).0, 2);
    assert_eq!(run_in(dir.path(), &["verify", "nonsense", "--p", "loop"]).0, 2);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["verify", "density-pi", "--p", "pv", "--pt", "ph", "--n", "50"]).0, 0);
    assert_eq!(run_in(dir.path(), &["verify", "density-pi", "--p", "pv", "--pt", "pv", "--n", "50"]).0, 1);
    // loop has no invariant-based reverse, so --pt is required.
    assert_eq!(run_in(dir.path(), &["verify", "density-pi", "--p", "loop", "--n", "50"]).0, 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn documents_round_trip(i in 0..7usize, seed in any::<u64>(), w in 0.2..4.0f64, h in 0.2..4.0f64, x0 in -3.0..3.0f64) {
        let p = registry(DEFAULT_ALPHA).swap_remove(i);
        let rect = Rectangle::new(x0, -h, x0 + w, 0.0).unwrap();
        let u = build_diagram(&p.params, &p.default_law, &rect, &mut RngStream::new(seed), DEFAULT_MAX_EVENTS).unwrap();
        let doc = DiagramDocument::new(&u, p.params, p.default_law, seed, seed % 2 == 0).unwrap();
        let back = decode_diagram(encode_diagram(&doc).as_bytes()).unwrap();
        prop_assert_eq!(back.configuration(), u);
        prop_assert_eq!(back, doc);
    }
}
