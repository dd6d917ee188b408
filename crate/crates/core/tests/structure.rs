mod common;

use bulletlab_core::model::label_mismatches;
use bulletlab_core::*;
use proptest::prelude::*;

fn diagram(preset: usize, seed: u64, w: f64, h: f64) -> (Parameter, InitialLaw, Configuration) {
    let (_, p, law) = common::presets().swap_remove(preset);
    let rect = Rectangle::new(-w / 2.0, -h / 3.0, w / 2.0, 2.0 * h / 3.0).unwrap();
    let u = build_diagram(&p, &law, &rect, &mut RngStream::new(seed), DEFAULT_MAX_EVENTS).unwrap();
    (p, law, u)
}

fn arb_diagram() -> impl Strategy<Value = (Parameter, InitialLaw, Configuration)> {
    (0..7usize, any::<u64>(), 0.5..4.0f64, 0.5..4.0f64).prop_map(|(i, s, w, h)| diagram(i, s, w, h))
}

fn arb_element() -> impl Strategy<Value = SymmetryElement> {
    (0..8usize).prop_map(|i| SymmetryElement::ALL[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simulated_diagrams_are_consistent((p, law, u) in arb_diagram()) {
        prop_assert!(validate_configuration(&u).is_empty());
        prop_assert!(label_mismatches(&u).unwrap().is_empty());
        let s = extract_stats(&u).unwrap();
        prop_assert!(s.satisfies_balance());
        prop_assert!(log_density(&u, &p, &law).unwrap().finite_support);
    }

    #[test]
    fn symmetry_commutes_with_skeleton((_, _, u) in arb_diagram(), g in arb_element()) {
        let image = apply_symmetry(g, &u);
        prop_assert!(validate_configuration(&image).is_empty());
        prop_assert_eq!(skeleton_of(&image).unwrap(), skeleton_of(&u).unwrap().transformed(g));
    }

    #[test]
    fn kind_tables_match_geometry((_, _, u) in arb_diagram(), g in arb_element()) {
        let s = extract_stats(&u).unwrap();
        let image = extract_stats(&apply_symmetry(g, &u)).unwrap();
        let mapped = stats_map_under_symmetry(g).apply(&s);
        prop_assert_eq!(mapped.counts(), image.counts());
        prop_assert_eq!((mapped.n, mapped.m), (image.n, image.m));
        prop_assert!(image.satisfies_balance());
    }

    #[test]
    fn lengths_follow_the_axes((_, _, u) in arb_diagram()) {
        let (lv, lh) = segment_lengths(&u);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(1.0);
        let (pv, ph) = segment_lengths(&apply_symmetry(SymmetryElement::Pi, &u));
        prop_assert!(close(pv, lv) && close(ph, lh));
        let (qv, qh) = segment_lengths(&apply_symmetry(SymmetryElement::Pi2, &u));
        prop_assert!(close(qv, lh) && close(qh, lv));
    }

    #[test]
    fn group_action((_, _, u) in arb_diagram(), g1 in arb_element(), g2 in arb_element()) {
        let twice = apply_symmetry(g2, &apply_symmetry(g1, &u));
        prop_assert_eq!(twice, apply_symmetry(g2.compose(g1), &u));
        prop_assert_eq!(apply_symmetry(g1.inverse(), &apply_symmetry(g1, &u)), u);
    }

    #[test]
    fn density_ignores_segment_order((p, law, u) in arb_diagram()) {
        let mut shuffled = u.clone();
        shuffled.segments.reverse();
        shuffled.crossings.reverse();
        prop_assert_eq!(log_density(&shuffled, &p, &law).unwrap(), log_density(&u, &p, &law).unwrap());
    }

    #[test]
    fn sampling_is_deterministic(i in 0..7usize, seed in any::<u64>()) {
        prop_assert_eq!(diagram(i, seed, 2.0, 2.0).2, diagram(i, seed, 2.0, 2.0).2);
    }

    #[test]
    fn restriction_stays_valid((_, _, u) in arb_diagram(), fx in 0.0..0.9f64, fy in 0.0..0.9f64) {
        let r = u.rect;
        let sub = Rectangle::new(r.x0() + fx * r.width(), r.y0() + fy * r.height(), r.x1(), r.y1()).unwrap();
        let v = restrict(&u, sub).unwrap();
        prop_assert!(validate_configuration(&v).is_empty());
        prop_assert!(extract_stats(&v).unwrap().satisfies_balance());
    }
}

fn shifted(u: &Configuration, dx: f64) -> Configuration {
    let segments = u
        .segments
        .iter()
        .map(|s| {
            let mut s = *s;
            if s.is_vertical() {
                s.anchor += dx;
            } else {
                s.lo = if s.lo == u.rect.x0() { s.lo } else { s.lo + dx };
                s.hi = if s.hi == u.rect.x1() { s.hi } else { s.hi + dx };
            }
            s
        })
        .collect();
    let crossings = u.crossings.iter().map(|c| Point::new(c.x + dx, c.y)).collect();
    Configuration::new(u.rect, segments, crossings)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_a_metric_on_a_class(
        (_, _, u) in arb_diagram(),
        d1 in -1e-3..1e-3f64,
        d2 in -1e-3..1e-3f64,
    ) {
        // Small horizontal shifts of every vertical stay in the skeleton class
        // unless some anchor sits within 1e-3 of another coordinate.
        let v = shifted(&u, d1);
        let w = shifted(&u, d2);
        prop_assume!(validate_configuration(&v).is_empty() && validate_configuration(&w).is_empty());
        prop_assume!(skeleton_of(&v).unwrap() == skeleton_of(&u).unwrap());
        prop_assume!(skeleton_of(&w).unwrap() == skeleton_of(&u).unwrap());
        let uv = config_distance(&u, &v).unwrap();
        let vu = config_distance(&v, &u).unwrap();
        let uw = config_distance(&u, &w).unwrap();
        let vw = config_distance(&v, &w).unwrap();
        prop_assert_eq!(config_distance(&u, &u).unwrap(), 0.0);
        prop_assert!(uv >= 0.0);
        prop_assert_eq!(uv, vu);
        prop_assert!(uw <= uv + vw + 1e-15);
        if u.verticals().next().is_some() && d1 != 0.0 {
            prop_assert!(uv > 0.0);
        }
    }
}
