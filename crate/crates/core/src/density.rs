//! Closed-form log-density of a diagram under Poisson entries, and the
//! per-configuration products of the elementary cases used as test oracles.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{extract_stats, total_lengths, ConfigStats, Configuration, Rectangle};
use crate::params::{Intensities, Parameter};
use crate::sampler::InitialLaw;

/// Natural log of a density. `finite_support` is false when some factor
/// with a positive exponent vanishes; `value` is then minus infinity and
/// serialises as `null`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LogDensity {
    #[serde(serialize_with = "write_value", deserialize_with = "read_value")]
    pub value: f64,
    pub finite_support: bool,
}

fn write_value<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_some(v)
    } else {
        s.serialize_none()
    }
}

fn read_value<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
}

impl LogDensity {
    fn zero_support() -> Self {
        LogDensity { value: f64::NEG_INFINITY, finite_support: false }
    }
}

/// Accumulates `sum count * ln(base)` with `0 ln 0 = 0`.
struct LogProduct {
    value: f64,
    finite: bool,
}

impl LogProduct {
    fn new(value: f64) -> Self {
        LogProduct { value, finite: true }
    }

    fn pow(&mut self, base: f64, count: u32) -> &mut Self {
        if count > 0 {
            if base > 0.0 {
                self.value += f64::from(count) * base.ln();
            } else {
                self.finite = false;
            }
        }
        self
    }

    fn factor(&mut self, base: f64) -> &mut Self {
        self.pow(base, 1)
    }

    fn require(&mut self, indicator: bool) -> &mut Self {
        self.finite &= indicator;
        self
    }

    fn finish(&self) -> LogDensity {
        if self.finite {
            LogDensity { value: self.value, finite_support: true }
        } else {
            LogDensity::zero_support()
        }
    }
}

/// Total lengths `(LV, LH)` of the vertical and horizontal segments.
pub fn segment_lengths(u: &Configuration) -> (f64, f64) {
    total_lengths(u)
}

/// Log-density from the sufficient statistics of a configuration on `rect`.
pub fn log_density_from_stats(stats: &ConfigStats, rect: &Rectangle, p: &Parameter, nu: Intensities) -> LogDensity {
    let (w, h) = (rect.width(), rect.height());
    let mut acc = LogProduct::new(
        -nu.nu_v * w - nu.nu_h * h - p.vertical_rate() * stats.lv - p.horizontal_rate() * stats.lh - p.lambda0 * w * h,
    );
    acc.pow(nu.nu_v, stats.ve)
        .pow(nu.nu_h, stats.he)
        .pow(p.lambda0, stats.ob)
        .pow(p.lambda_h, stats.vb)
        .pow(p.lambda_v, stats.hb)
        .pow(p.tau_h, stats.vt)
        .pow(p.tau_v, stats.ht)
        .pow(p.p_v, stats.ha)
        .pow(p.p_h, stats.va)
        .pow(p.p0, stats.oa)
        .pow(p.crossing_probability(), stats.cc);
    acc.finish()
}

/// Log-density of `u` under the model `p` with Poisson entries.
pub fn log_density(u: &Configuration, p: &Parameter, law: &InitialLaw) -> Result<LogDensity> {
    let nu = law.intensities().ok_or(Error::UnsupportedLaw)?;
    let stats = extract_stats(u)?;
    Ok(log_density_from_stats(&stats, &u.rect, p, nu))
}

/// Small configurations used to cross-check the density under a half turn:
/// `[-a, a] x [-b, b]` with at most one entry on each incoming edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfTurnRow {
    /// No segment at all.
    Empty,
    /// One vertical at `x` crossing the whole height.
    Vertical,
    /// Horizontal at `y` absorbed at `(x, y)` by a full vertical.
    Coalescence,
    /// Horizontal at `y` turning up at `(x, y)`.
    Turn,
    /// Horizontal and vertical annihilating at `(x, y)`.
    Annihilation,
    /// Full horizontal at `y` and full vertical at `x` crossing.
    Crossing,
}

impl HalfTurnRow {
    pub const ALL: [HalfTurnRow; 6] = [
        HalfTurnRow::Empty,
        HalfTurnRow::Vertical,
        HalfTurnRow::Coalescence,
        HalfTurnRow::Turn,
        HalfTurnRow::Annihilation,
        HalfTurnRow::Crossing,
    ];
}

/// Small configurations used to cross-check the density under a quarter turn,
/// drawn on the rotated rectangle `[-b, b] x [-a, a]`. Each starts from one horizontal
/// entry at ordinate `-x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuarterTurnRow {
    /// Full horizontal.
    Horizontal,
    /// Full horizontal absorbing a vertical entering at `y`.
    Absorption,
    /// Horizontal and a vertical entering at `y` annihilating at `(y, -x)`.
    Annihilation,
    /// Horizontal annihilating at `(y0, -x)` with a vertical born with a
    /// horizontal at `(y0, -x0)`, `x < x0`.
    BirthAnnihilation,
    /// Full horizontal; a vertical entering at `y0` turns at `(y0, -x0)`
    /// below it, `x < x0`.
    EntryTurn,
    /// Horizontal turns up at `(y0, -x)`, then right at `(y0, -x0)`, `x0 < x`.
    DoubleTurn,
    /// Vertical entering at `y0` kills the horizontal at `(y0, -x)`, then
    /// turns at `(y0, -x0)`, `x0 < x`.
    AbsorbThenTurn,
    /// Full horizontal splits at `(y0, -x)`; the new vertical turns at
    /// `(y0, -x0)`, `x0 < x`.
    SplitThenTurn,
    /// Vertical entering at `y0` crosses the full horizontal at `(y0, -x)`
    /// and turns at `(y0, -x0)`, `x0 < x`.
    CrossThenTurn,
}

impl QuarterTurnRow {
    pub const ALL: [QuarterTurnRow; 9] = [
        QuarterTurnRow::Horizontal,
        QuarterTurnRow::Absorption,
        QuarterTurnRow::Annihilation,
        QuarterTurnRow::BirthAnnihilation,
        QuarterTurnRow::EntryTurn,
        QuarterTurnRow::DoubleTurn,
        QuarterTurnRow::AbsorbThenTurn,
        QuarterTurnRow::SplitThenTurn,
        QuarterTurnRow::CrossThenTurn,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementaryCase {
    /// A half-turn row; `image` selects its image under the half turn.
    HalfTurn {
        row: HalfTurnRow,
        image: bool,
    },
    QuarterTurn(QuarterTurnRow),
}

/// Half-sides `a`, `b` of the window and the event coordinates of a row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementaryCoords {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub y: f64,
    pub x0: f64,
    pub y0: f64,
}

fn inside(lo: f64, v: f64, hi: f64) -> bool {
    lo < v && v < hi
}

/// Product of the elementary factors of one case, on log scale.
///
/// Half-turn rows live on `[-a, a] x [-b, b]`; their images use the points
/// `(-x, -y)`. Quarter-turn rows live on `[-b, b] x [-a, a]`.
pub fn elementary_density_oracle(
    case: ElementaryCase,
    c: ElementaryCoords,
    p: &Parameter,
    nu: Intensities,
) -> LogDensity {
    let ElementaryCoords { a, b, x, y, x0, y0 } = c;
    let (rv, rh) = (p.vertical_rate(), p.horizontal_rate());
    let cross = 1.0 - p.p_v - p.p_h - p.p0;
    match case {
        ElementaryCase::HalfTurn { row, image } => {
            let mut acc = LogProduct::new(-2.0 * nu.nu_h * b - 2.0 * nu.nu_v * a - 4.0 * p.lambda0 * a * b);
            let in_x = inside(-a, x, a);
            let in_y = inside(-b, y, b);
            match (row, image) {
                (HalfTurnRow::Empty, _) => {}
                (HalfTurnRow::Vertical, _) => {
                    acc.factor(nu.nu_v).require(in_x);
                    acc.value -= 2.0 * rv * b;
                }
                (HalfTurnRow::Coalescence, false) => {
                    acc.factor(p.p_v).factor(nu.nu_h).factor(nu.nu_v).require(in_x && in_y);
                    acc.value -= rh * (a + x) + 2.0 * rv * b;
                }
                (HalfTurnRow::Coalescence, true) => {
                    acc.factor(nu.nu_v).factor(p.lambda_v).require(in_x && in_y);
                    acc.value -= 2.0 * rv * b + rh * (a + x);
                }
                (HalfTurnRow::Turn, false) => {
                    acc.factor(nu.nu_h).factor(p.tau_h).require(in_x && in_y);
                    acc.value -= rh * (a + x) + rv * (b - y);
                }
                (HalfTurnRow::Turn, true) => {
                    acc.factor(nu.nu_v).factor(p.tau_v).require(in_x && in_y);
                    acc.value -= rv * (b - y) + rh * (a + x);
                }
                (HalfTurnRow::Annihilation, false) => {
                    acc.factor(p.p0).factor(nu.nu_h).factor(nu.nu_v).require(in_x && in_y);
                    acc.value -= rh * (a + x) + rv * (b + y);
                }
                (HalfTurnRow::Annihilation, true) => {
                    acc.factor(p.lambda0).require(in_x && in_y);
                    acc.value -= rh * (a + x) + rv * (b + y);
                }
                (HalfTurnRow::Crossing, _) => {
                    acc.factor(cross).factor(nu.nu_h).factor(nu.nu_v).require(in_x && in_y);
                    acc.value -= 2.0 * rh * a + 2.0 * rv * b;
                }
            }
            acc.finish()
        }
        ElementaryCase::QuarterTurn(row) => {
            // The rotated window has width 2b and height 2a.
            let mut acc = LogProduct::new(-2.0 * nu.nu_h * a - 2.0 * nu.nu_v * b - 4.0 * p.lambda0 * a * b);
            acc.factor(nu.nu_h).require(inside(-a, -x, a));
            let in_y = inside(-b, y, b);
            let in_y0 = inside(-b, y0, b);
            let above = inside(-a, -x0, -x);
            let below = inside(-x, -x0, a);
            match row {
                QuarterTurnRow::Horizontal => {
                    acc.value -= 2.0 * rh * b;
                }
                QuarterTurnRow::Absorption => {
                    acc.factor(p.p_h).factor(nu.nu_v).require(in_y);
                    acc.value -= 2.0 * rh * b + rv * (a - x);
                }
                QuarterTurnRow::Annihilation => {
                    acc.factor(p.p0).factor(nu.nu_v).require(in_y);
                    acc.value -= rh * (y + b) + rv * (a - x);
                }
                QuarterTurnRow::BirthAnnihilation => {
                    acc.factor(p.p0).factor(p.lambda0).require(in_y0 && above);
                    acc.value -= 2.0 * rh * b + rv * (x0 - x);
                }
                QuarterTurnRow::EntryTurn => {
                    acc.factor(nu.nu_v).factor(p.tau_v).require(in_y0 && above);
                    acc.value -= 2.0 * rh * b + rv * (a - x0) + rh * (b - y0);
                }
                QuarterTurnRow::DoubleTurn => {
                    acc.factor(p.tau_h).factor(p.tau_v).require(in_y0 && below);
                    acc.value -= 2.0 * rh * b + rv * (x - x0);
                }
                QuarterTurnRow::AbsorbThenTurn => {
                    acc.factor(nu.nu_v).factor(p.p_v).factor(p.tau_v).require(in_y0 && below);
                    acc.value -= 2.0 * rh * b + rv * (a - x0);
                }
                QuarterTurnRow::SplitThenTurn => {
                    acc.factor(p.lambda_h).factor(p.tau_v).require(in_y0 && below);
                    acc.value -= 2.0 * rh * b + rv * (x - x0) + rh * (b - y0);
                }
                QuarterTurnRow::CrossThenTurn => {
                    acc.factor(nu.nu_v).factor(cross).factor(p.tau_v).require(in_y0 && below);
                    acc.value -= rh * (b - y0) + 2.0 * rh * b + rv * (a - x0);
                }
            }
            acc.finish()
        }
    }
}
