use bulletlab_core::density::{
    elementary_density_oracle, ElementaryCase, ElementaryCoords, HalfTurnRow, QuarterTurnRow,
};
use bulletlab_core::PointKind::*;
use bulletlab_core::*;
use proptest::prelude::*;

fn half_turn(row: HalfTurnRow, image: bool, c: &ElementaryCoords) -> Configuration {
    let ElementaryCoords { a, b, .. } = *c;
    let (x, y) = if image { (-c.x, -c.y) } else { (c.x, c.y) };
    let rect = Rectangle::centered(a, b).unwrap();
    let v = Segment::vertical;
    let h = Segment::horizontal;
    let (segments, crossings) = match (row, image) {
        (HalfTurnRow::Empty, _) => (vec![], vec![]),
        (HalfTurnRow::Vertical, _) => (vec![v(x, -b, b, VE, VS)], vec![]),
        (HalfTurnRow::Coalescence, false) => (vec![v(x, -b, b, VE, VS), h(y, -a, x, HE, HA)], vec![]),
        (HalfTurnRow::Coalescence, true) => (vec![v(x, -b, b, VE, VS), h(y, x, a, HB, HS)], vec![]),
        (HalfTurnRow::Turn, false) => (vec![h(y, -a, x, HE, VT), v(x, y, b, VT, VS)], vec![]),
        (HalfTurnRow::Turn, true) => (vec![v(x, -b, y, VE, HT), h(y, x, a, HT, HS)], vec![]),
        (HalfTurnRow::Annihilation, false) => (vec![h(y, -a, x, HE, OA), v(x, -b, y, VE, OA)], vec![]),
        (HalfTurnRow::Annihilation, true) => (vec![v(x, y, b, OB, VS), h(y, x, a, OB, HS)], vec![]),
        (HalfTurnRow::Crossing, _) => (vec![v(x, -b, b, VE, VS), h(y, -a, a, HE, HS)], vec![Point::new(x, y)]),
    };
    Configuration::new(rect, segments, crossings)
}

fn quarter_turn(row: QuarterTurnRow, c: &ElementaryCoords) -> Configuration {
    let ElementaryCoords { a, b, x, y, x0, y0 } = *c;
    let rect = Rectangle::centered(b, a).unwrap();
    let v = Segment::vertical;
    let h = Segment::horizontal;
    let full = h(-x, -b, b, HE, HS);
    let (segments, crossings) = match row {
        QuarterTurnRow::Horizontal => (vec![full], vec![]),
        QuarterTurnRow::Absorption => (vec![full, v(y, -a, -x, VE, VA)], vec![]),
        QuarterTurnRow::Annihilation => (vec![h(-x, -b, y, HE, OA), v(y, -a, -x, VE, OA)], vec![]),
        QuarterTurnRow::BirthAnnihilation => {
            (vec![h(-x, -b, y0, HE, OA), v(y0, -x0, -x, OB, OA), h(-x0, y0, b, OB, HS)], vec![])
        }
        QuarterTurnRow::EntryTurn => (vec![full, v(y0, -a, -x0, VE, HT), h(-x0, y0, b, HT, HS)], vec![]),
        QuarterTurnRow::DoubleTurn => {
            (vec![h(-x, -b, y0, HE, VT), v(y0, -x, -x0, VT, HT), h(-x0, y0, b, HT, HS)], vec![])
        }
        QuarterTurnRow::AbsorbThenTurn => {
            (vec![h(-x, -b, y0, HE, HA), v(y0, -a, -x0, VE, HT), h(-x0, y0, b, HT, HS)], vec![])
        }
        QuarterTurnRow::SplitThenTurn => (vec![full, v(y0, -x, -x0, VB, HT), h(-x0, y0, b, HT, HS)], vec![]),
        QuarterTurnRow::CrossThenTurn => {
            (vec![full, v(y0, -a, -x0, VE, HT), h(-x0, y0, b, HT, HS)], vec![Point::new(y0, -x)])
        }
    };
    Configuration::new(rect, segments, crossings)
}

/// Rates bounded away from zero and meeting probabilities with a positive
/// crossing share.
fn arb_params() -> impl Strategy<Value = Parameter> {
    (prop::array::uniform5(0.1..2.0f64), prop::array::uniform4(0.05..1.0f64)).prop_map(|(r, w)| {
        let s: f64 = w.iter().sum();
        Parameter::from_tuple([r[0], r[1], r[2], r[3], r[4], w[0] / s, w[1] / s, w[2] / s]).unwrap()
    })
}

fn arb_nu() -> impl Strategy<Value = Intensities> {
    (0.1..3.0f64, 0.1..3.0f64).prop_map(|(h, v)| Intensities::new(h, v).unwrap())
}

/// Coordinates strictly inside the window; `x0` sits between `x` and `a`
/// when `far`, and between `-a` and `x` otherwise.
fn arb_coords(far: bool) -> impl Strategy<Value = ElementaryCoords> {
    (0.3..2.0f64, 0.3..2.0f64, -0.9..0.9f64, -0.9..0.9f64, 0.05..0.95f64, -0.9..0.9f64).prop_map(
        move |(a, b, fx, fy, t, fy0)| {
            let x = fx * a;
            let x0 = if far { x + t * (a - x) } else { -a + t * (x + a) };
            ElementaryCoords { a, b, x, y: fy * b, x0, y0: fy0 * b }
        },
    )
}

fn agree(
    u: &Configuration,
    case: ElementaryCase,
    c: ElementaryCoords,
    p: &Parameter,
    nu: Intensities,
) -> std::result::Result<(), TestCaseError> {
    prop_assert!(validate_configuration(u).is_empty(), "{:?}", validate_configuration(u));
    let d = log_density(u, p, &InitialLaw::Ppp(nu)).unwrap();
    let o = elementary_density_oracle(case, c, p, nu);
    prop_assert!(d.finite_support && o.finite_support);
    prop_assert!((d.value - o.value).abs() <= 1e-12, "{case:?}: {} vs {}", d.value, o.value);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn half_turn_rows(c in arb_coords(true), p in arb_params(), nu in arb_nu()) {
        for row in HalfTurnRow::ALL {
            for image in [false, true] {
                agree(&half_turn(row, image, &c), ElementaryCase::HalfTurn { row, image }, c, &p, nu)?;
            }
        }
    }

    #[test]
    fn quarter_turn_rows(c0 in arb_coords(true), c1 in arb_coords(false), p in arb_params(), nu in arb_nu()) {
        for row in QuarterTurnRow::ALL {
            let c = match row {
                QuarterTurnRow::BirthAnnihilation | QuarterTurnRow::EntryTurn => c0,
                _ => c1,
            };
            agree(&quarter_turn(row, &c), ElementaryCase::QuarterTurn(row), c, &p, nu)?;
        }
    }

    #[test]
    fn half_turn_pairs_match_under_reversal(c in arb_coords(true)) {
        // The half-turn reverse of the loop model is itself.
        let p = Parameter::from_tuple([1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let law = InitialLaw::ppp(1.0, 1.0).unwrap();
        for row in HalfTurnRow::ALL {
            let u = half_turn(row, false, &c);
            let image = apply_symmetry(SymmetryElement::Pi, &u);
            let d0 = log_density(&u, &p, &law).unwrap();
            let d1 = log_density(&image, &p, &law).unwrap();
            prop_assert_eq!(d0.finite_support, d1.finite_support);
            if d0.finite_support {
                prop_assert!((d0.value - d1.value).abs() <= 1e-12);
            }
        }
    }
}
