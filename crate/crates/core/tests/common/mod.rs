#![allow(dead_code)]

use bulletlab_core::{InitialLaw, Parameter};

pub fn presets() -> Vec<(&'static str, Parameter, InitialLaw)> {
    let t = |a| Parameter::from_tuple(a).unwrap();
    let ppp = |n| InitialLaw::ppp(n, n).unwrap();
    vec![
        ("cbmc", t([0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]), ppp(1.0)),
        ("loop-half", t([0.0, 1.0, 1.0, 0.0, 0.0, 0.5, 0.5, 0.0]), ppp(2.0)),
        ("loop", t([1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]), ppp(1.0)),
        ("hammersley", t([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]), ppp(1.0)),
        ("bggs", t([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.25, 0.75]), ppp(1.0)),
        ("pv", t([0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0]), ppp(1.0)),
        ("ph", t([0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0]), ppp(1.0)),
    ]
}

pub fn preset(name: &str) -> Parameter {
    presets().into_iter().find(|(n, ..)| *n == name).unwrap().1
}
