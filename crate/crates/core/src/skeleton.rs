//! Combinatorial skeletons: configurations up to increasing reparametrisation
//! of each axis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_configuration, Configuration, Point, PointKind, Rectangle, Segment};
use crate::symmetry::{apply_symmetry, SymmetryElement};

/// Where a segment end sits along its axis of travel: on the rectangle edge
/// or on the anchor of the opposite-orientation segment with this 1-based rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EndRef {
    Edge,
    Rank(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SegmentCode {
    pub lo: EndRef,
    pub hi: EndRef,
    pub lo_kind: PointKind,
    pub hi_kind: PointKind,
}

/// Verticals ordered by abscissa and horizontals by ordinate; crossings as
/// `(vertical rank, horizontal rank)` pairs, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Skeleton {
    pub n: u32,
    pub m: u32,
    pub verticals: Vec<SegmentCode>,
    pub horizontals: Vec<SegmentCode>,
    pub crossings: Vec<(u32, u32)>,
}

fn rank_of(sorted: &[f64], v: f64) -> Option<u32> {
    let i = sorted.partition_point(|&a| a < v);
    (i < sorted.len() && sorted[i] == v).then_some(i as u32 + 1)
}

fn sorted_anchors<'a>(segs: impl Iterator<Item = &'a Segment>) -> Vec<f64> {
    let mut a: Vec<f64> = segs.map(|s| s.anchor).collect();
    a.sort_by(f64::total_cmp);
    a
}

/// Rank encoding of a valid configuration.
pub fn skeleton_of(u: &Configuration) -> Result<Skeleton> {
    let violations = validate_configuration(u);
    if !violations.is_empty() {
        return Err(Error::InvalidConfiguration(violations));
    }
    let xs = sorted_anchors(u.verticals());
    let ys = sorted_anchors(u.horizontals());
    let code = |s: &Segment, opposite: &[f64], edge_lo: f64, edge_hi: f64| {
        let end = |t: f64, edge: f64| {
            if t == edge {
                EndRef::Edge
            } else {
                EndRef::Rank(rank_of(opposite, t).expect("valid endpoints lie on opposite anchors"))
            }
        };
        SegmentCode { lo: end(s.lo, edge_lo), hi: end(s.hi, edge_hi), lo_kind: s.lo_kind, hi_kind: s.hi_kind }
    };
    let r = u.rect;
    let mut verticals: Vec<&Segment> = u.verticals().collect();
    verticals.sort_by(|a, b| a.anchor.total_cmp(&b.anchor));
    let mut horizontals: Vec<&Segment> = u.horizontals().collect();
    horizontals.sort_by(|a, b| a.anchor.total_cmp(&b.anchor));
    let mut crossings: Vec<(u32, u32)> = u
        .crossings
        .iter()
        .map(|c| {
            (
                rank_of(&xs, c.x).expect("valid crossings lie on a vertical"),
                rank_of(&ys, c.y).expect("valid crossings lie on a horizontal"),
            )
        })
        .collect();
    crossings.sort_unstable();
    Ok(Skeleton {
        n: xs.len() as u32,
        m: ys.len() as u32,
        verticals: verticals.iter().map(|s| code(s, &ys, r.y0(), r.y1())).collect(),
        horizontals: horizontals.iter().map(|s| code(s, &xs, r.x0(), r.x1())).collect(),
        crossings,
    })
}

impl Skeleton {
    /// Coordinates `x_i = x0 + i w / (n + 1)`, `y_j = y0 + j h / (m + 1)`.
    pub fn canonical_coordinates(&self, rect: &Rectangle) -> (Vec<f64>, Vec<f64>) {
        let xs = (1..=self.n).map(|i| rect.x0() + f64::from(i) * rect.width() / f64::from(self.n + 1)).collect();
        let ys = (1..=self.m).map(|j| rect.y0() + f64::from(j) * rect.height() / f64::from(self.m + 1)).collect();
        (xs, ys)
    }

    /// The configuration of this skeleton placed on canonical coordinates.
    pub fn canonical_representative(&self, rect: &Rectangle) -> Configuration {
        let (xs, ys) = self.canonical_coordinates(rect);
        self.realize(rect, &xs, &ys)
    }

    /// Places the skeleton on the given increasing anchor coordinates.
    pub fn realize(&self, rect: &Rectangle, xs: &[f64], ys: &[f64]) -> Configuration {
        let at = |r: EndRef, coords: &[f64], edge: f64| match r {
            EndRef::Edge => edge,
            EndRef::Rank(k) => coords[k as usize - 1],
        };
        let mut segments = Vec::with_capacity(xs.len() + ys.len());
        for (c, &x) in self.verticals.iter().zip(xs) {
            segments.push(Segment::vertical(x, at(c.lo, ys, rect.y0()), at(c.hi, ys, rect.y1()), c.lo_kind, c.hi_kind));
        }
        for (c, &y) in self.horizontals.iter().zip(ys) {
            segments.push(Segment::horizontal(
                y,
                at(c.lo, xs, rect.x0()),
                at(c.hi, xs, rect.x1()),
                c.lo_kind,
                c.hi_kind,
            ));
        }
        let crossings =
            self.crossings.iter().map(|&(i, j)| Point::new(xs[i as usize - 1], ys[j as usize - 1])).collect();
        Configuration::new(*rect, segments, crossings)
    }

    /// Skeleton of the image under `g`.
    pub fn transformed(&self, g: SymmetryElement) -> Skeleton {
        let rect = Rectangle::centered(1.0, 1.0).expect("unit square");
        skeleton_of(&apply_symmetry(g, &self.canonical_representative(&rect))).expect("symmetries preserve validity")
    }
}

/// Skeleton-aware distance: 3 across skeleton classes, otherwise the mean
/// normalised displacement of vertical anchors plus that of horizontal ones.
pub fn config_distance(u: &Configuration, v: &Configuration) -> Result<f64> {
    if u.rect != v.rect {
        return Err(Error::RectangleMismatch);
    }
    if skeleton_of(u)? != skeleton_of(v)? {
        return Ok(3.0);
    }
    let term = |a: Vec<f64>, b: Vec<f64>, scale: f64| {
        if a.is_empty() {
            0.0
        } else {
            a.iter().zip(&b).map(|(p, q)| (p - q).abs() / scale).sum::<f64>() / a.len() as f64
        }
    };
    Ok(term(sorted_anchors(u.verticals()), sorted_anchors(v.verticals()), u.rect.width())
        + term(sorted_anchors(u.horizontals()), sorted_anchors(v.horizontals()), u.rect.height()))
}
