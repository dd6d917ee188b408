//! The dihedral group of the square acting on rectangles, configurations
//! and point-kind statistics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ConfigStats, Configuration, LineStatus, Orientation, Point, PointKind, Rectangle, Segment};

/// Elements of D4. Rotations are counterclockwise, `Pi2(x, y) = (-y, x)`,
/// and `R(x, y) = (y, x)`. `RPi2` is `R` applied after `Pi2`, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryElement {
    #[serde(rename = "id")]
    Id,
    #[serde(rename = "pi2")]
    Pi2,
    #[serde(rename = "pi")]
    Pi,
    #[serde(rename = "pi32")]
    Pi32,
    #[serde(rename = "r")]
    R,
    #[serde(rename = "rpi2")]
    RPi2,
    #[serde(rename = "rpi")]
    RPi,
    #[serde(rename = "rpi32")]
    RPi32,
}

/// `g(x, y) = swap ? (sx * y, sy * x) : (sx * x, sy * y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Linear {
    swap: bool,
    sx: i8,
    sy: i8,
}

impl SymmetryElement {
    pub const ALL: [SymmetryElement; 8] = [
        SymmetryElement::Id,
        SymmetryElement::Pi2,
        SymmetryElement::Pi,
        SymmetryElement::Pi32,
        SymmetryElement::R,
        SymmetryElement::RPi2,
        SymmetryElement::RPi,
        SymmetryElement::RPi32,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SymmetryElement::Id => "id",
            SymmetryElement::Pi2 => "pi2",
            SymmetryElement::Pi => "pi",
            SymmetryElement::Pi32 => "pi32",
            SymmetryElement::R => "r",
            SymmetryElement::RPi2 => "rpi2",
            SymmetryElement::RPi => "rpi",
            SymmetryElement::RPi32 => "rpi32",
        }
    }

    fn linear(self) -> Linear {
        let (swap, sx, sy) = match self {
            SymmetryElement::Id => (false, 1, 1),
            SymmetryElement::Pi2 => (true, -1, 1),
            SymmetryElement::Pi => (false, -1, -1),
            SymmetryElement::Pi32 => (true, 1, -1),
            SymmetryElement::R => (true, 1, 1),
            SymmetryElement::RPi2 => (false, 1, -1),
            SymmetryElement::RPi => (true, -1, -1),
            SymmetryElement::RPi32 => (false, -1, 1),
        };
        Linear { swap, sx, sy }
    }

    /// Row-major 2x2 integer matrix of the linear map.
    pub fn matrix(self) -> [[i8; 2]; 2] {
        let l = self.linear();
        if l.swap {
            [[0, l.sx], [l.sy, 0]]
        } else {
            [[l.sx, 0], [0, l.sy]]
        }
    }

    fn from_matrix(m: [[i8; 2]; 2]) -> SymmetryElement {
        Self::ALL.into_iter().find(|g| g.matrix() == m).expect("D4 is closed under composition")
    }

    /// `self` after `first`, i.e. `x -> self(first(x))`.
    pub fn compose(self, first: SymmetryElement) -> SymmetryElement {
        let (a, b) = (self.matrix(), first.matrix());
        let mut m = [[0i8; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self::from_matrix(m)
    }

    pub fn inverse(self) -> SymmetryElement {
        Self::ALL
            .into_iter()
            .find(|h| h.compose(self) == SymmetryElement::Id)
            .expect("every group element has an inverse")
    }

    /// Whether vertical and horizontal lines exchange roles.
    pub fn swaps_axes(self) -> bool {
        self.linear().swap
    }

    pub fn apply_point(self, p: Point) -> Point {
        let l = self.linear();
        let (sx, sy) = (f64::from(l.sx), f64::from(l.sy));
        if l.swap {
            Point::new(sx * p.y, sy * p.x)
        } else {
            Point::new(sx * p.x, sy * p.y)
        }
    }

    pub fn apply_rect(self, r: &Rectangle) -> Rectangle {
        let a = self.apply_point(Point::new(r.x0(), r.y0()));
        let b = self.apply_point(Point::new(r.x1(), r.y1()));
        Rectangle::new(a.x.min(b.x), a.y.min(b.y), a.x.max(b.x), a.y.max(b.y))
            .expect("images of rectangles are rectangles")
    }

    /// Kind of the image of a point of kind `k`.
    pub fn apply_kind(self, k: PointKind) -> PointKind {
        let l = self.linear();
        let flip = |s: LineStatus, sign: i8| if sign < 0 { s.reversed() } else { s };
        let (v, h) = k.statuses();
        let (v2, h2) = if l.swap { (flip(h, l.sy), flip(v, l.sx)) } else { (flip(v, l.sy), flip(h, l.sx)) };
        PointKind::from_statuses(v2, h2).expect("symmetries permute kinds")
    }
}

impl fmt::Display for SymmetryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetryElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown symmetry {s:?}; expected one of id, r, pi, pi2, pi32, rpi, rpi2, rpi32"
            ))
        })
    }
}

fn map_segment(g: SymmetryElement, s: &Segment) -> Segment {
    let l = g.linear();
    let (orientation, anchor, along_sign) = match (s.orientation, l.swap) {
        (Orientation::Vertical, false) => (Orientation::Vertical, f64::from(l.sx) * s.anchor, l.sy),
        (Orientation::Vertical, true) => (Orientation::Horizontal, f64::from(l.sy) * s.anchor, l.sx),
        (Orientation::Horizontal, false) => (Orientation::Horizontal, f64::from(l.sy) * s.anchor, l.sx),
        (Orientation::Horizontal, true) => (Orientation::Vertical, f64::from(l.sx) * s.anchor, l.sy),
    };
    let (lo_kind, hi_kind) = (g.apply_kind(s.lo_kind), g.apply_kind(s.hi_kind));
    if along_sign > 0 {
        Segment { orientation, anchor, lo: s.lo, hi: s.hi, lo_kind, hi_kind }
    } else {
        Segment { orientation, anchor, lo: -s.hi, hi: -s.lo, lo_kind: hi_kind, hi_kind: lo_kind }
    }
}

/// Image of a configuration, living on `g(rect)`.
pub fn apply_symmetry(g: SymmetryElement, u: &Configuration) -> Configuration {
    let segments = u.segments.iter().map(|s| map_segment(g, s)).collect();
    let crossings = u.crossings.iter().map(|&p| g.apply_point(p)).collect();
    Configuration::new(g.apply_rect(&u.rect), segments, crossings)
}

/// Permutation of point kinds induced by a symmetry, stored as a pullback:
/// a point of kind `k` in `g(U)` comes from a point of kind `source_of(k)`
/// in `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KindPermutation {
    source: [PointKind; 13],
    swaps_axes: bool,
}

impl KindPermutation {
    pub fn identity() -> Self {
        KindPermutation { source: PointKind::ALL, swaps_axes: false }
    }

    fn from_pairs(pairs: &[(PointKind, PointKind)], swaps_axes: bool) -> Self {
        let mut source = PointKind::ALL;
        for &(image, from) in pairs {
            source[image.index()] = from;
        }
        KindPermutation { source, swaps_axes }
    }

    pub fn source_of(&self, k: PointKind) -> PointKind {
        self.source[k.index()]
    }

    /// Kind in `g(U)` of a point of kind `k` in `U`.
    pub fn image_of(&self, k: PointKind) -> PointKind {
        PointKind::ALL.into_iter().find(|&i| self.source_of(i) == k).expect("a permutation is onto")
    }

    pub fn swaps_axes(&self) -> bool {
        self.swaps_axes
    }

    /// Permutation of the symmetry `second` applied after `self`.
    pub fn then(&self, second: &KindPermutation) -> KindPermutation {
        let mut source = PointKind::ALL;
        for k in PointKind::ALL {
            source[k.index()] = self.source_of(second.source_of(k));
        }
        KindPermutation { source, swaps_axes: self.swaps_axes != second.swaps_axes }
    }

    /// Statistics of `g(U)` predicted from those of `U`.
    pub fn apply(&self, stats: &ConfigStats) -> ConfigStats {
        stats.pulled_back(|k| self.source_of(k), self.swaps_axes)
    }
}

fn half_turn() -> KindPermutation {
    use PointKind::*;
    KindPermutation::from_pairs(
        &[
            (VE, VS),
            (VS, VE),
            (HE, HS),
            (HS, HE),
            (OB, OA),
            (OA, OB),
            (VB, VA),
            (VA, VB),
            (HB, HA),
            (HA, HB),
            (VT, HT),
            (HT, VT),
        ],
        false,
    )
}

fn quarter_turn() -> KindPermutation {
    use PointKind::*;
    KindPermutation::from_pairs(
        &[
            (VE, HE),
            (HE, VS),
            (OB, HT),
            (VB, HB),
            (HB, VA),
            (VT, OB),
            (HT, OA),
            (HA, VB),
            (VA, HA),
            (OA, VT),
            (VS, HS),
            (HS, VE),
        ],
        true,
    )
}

fn diagonal_flip() -> KindPermutation {
    use PointKind::*;
    KindPermutation::from_pairs(
        &[(VE, HE), (HE, VE), (VS, HS), (HS, VS), (VB, HB), (HB, VB), (VT, HT), (HT, VT), (VA, HA), (HA, VA)],
        true,
    )
}

/// Kind permutation of `g`, built from the half-turn, quarter-turn and
/// diagonal-flip tables and the composition law.
pub fn stats_map_under_symmetry(g: SymmetryElement) -> KindPermutation {
    let (p, s, r) = (quarter_turn(), half_turn(), diagonal_flip());
    match g {
        SymmetryElement::Id => KindPermutation::identity(),
        SymmetryElement::Pi2 => p,
        SymmetryElement::Pi => s,
        SymmetryElement::Pi32 => p.then(&s),
        SymmetryElement::R => r,
        SymmetryElement::RPi2 => p.then(&r),
        SymmetryElement::RPi => s.then(&r),
        SymmetryElement::RPi32 => p.then(&s).then(&r),
    }
}
