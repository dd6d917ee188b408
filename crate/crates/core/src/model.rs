//! Space-time diagrams: rectangles, segments, point kinds and the structural
//! checks and statistics defined on finite configurations.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned window `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRectangle", into = "RawRectangle")]
pub struct Rectangle {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRectangle {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl TryFrom<RawRectangle> for Rectangle {
    type Error = Error;
    fn try_from(r: RawRectangle) -> Result<Self> {
        Rectangle::new(r.x0, r.y0, r.x1, r.y1)
    }
}

impl From<Rectangle> for RawRectangle {
    fn from(r: Rectangle) -> Self {
        RawRectangle { x0: r.x0, y0: r.y0, x1: r.x1, y1: r.y1 }
    }
}

impl Rectangle {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        let finite = [x0, y0, x1, y1].iter().all(|v| v.is_finite());
        if !finite || x0 >= x1 || y0 >= y1 {
            return Err(Error::InvalidRectangle { x0, y0, x1, y1 });
        }
        Ok(Rectangle { x0, y0, x1, y1 })
    }

    /// The centred rectangle `[-a, a] x [-b, b]`.
    pub fn centered(a: f64, b: f64) -> Result<Self> {
        Self::new(-a, -b, a, b)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }
    pub fn y0(&self) -> f64 {
        self.y0
    }
    pub fn x1(&self) -> f64 {
        self.x1
    }
    pub fn y1(&self) -> f64 {
        self.y1
    }
    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }
    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains_rect(&self, other: &Rectangle) -> bool {
        self.x0 <= other.x0 && other.x1 <= self.x1 && self.y0 <= other.y0 && other.y1 <= self.y1
    }

    /// True when the point lies in the open interior.
    pub fn contains_interior(&self, p: Point) -> bool {
        self.x0 < p.x && p.x < self.x1 && self.y0 < p.y && p.y < self.y1
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.x0, self.x1, self.y0, self.y1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point { x: a[0], y: a[1] }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Vertical,
    Horizontal,
}

/// Role of one line at a point of the diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineStatus {
    Absent,
    Start,
    End,
    Through,
}

impl LineStatus {
    /// Start and end exchange when the line's direction of travel is reversed.
    pub fn reversed(self) -> Self {
        match self {
            LineStatus::Start => LineStatus::End,
            LineStatus::End => LineStatus::Start,
            other => other,
        }
    }
}

/// The thirteen kinds of points of a diagram.
///
/// The first letter names the line whose segment starts or stops there, the
/// second letter the event: `E` entry, `S` exit, `B` birth, `T` turn,
/// `A` absorption. `O*` involve both lines at once, `CC` is a crossing.
/// `HT` is where a vertical line turns into a horizontal one and `VT` the
/// converse; `HA` is a horizontal killed by a vertical that survives.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointKind {
    VE,
    VS,
    HE,
    HS,
    OB,
    OA,
    VB,
    HB,
    VT,
    HT,
    VA,
    HA,
    CC,
}

impl PointKind {
    pub const ALL: [PointKind; 13] = [
        PointKind::VE,
        PointKind::VS,
        PointKind::HE,
        PointKind::HS,
        PointKind::OB,
        PointKind::OA,
        PointKind::VB,
        PointKind::HB,
        PointKind::VT,
        PointKind::HT,
        PointKind::VA,
        PointKind::HA,
        PointKind::CC,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            PointKind::VE => "VE",
            PointKind::VS => "VS",
            PointKind::HE => "HE",
            PointKind::HS => "HS",
            PointKind::OB => "OB",
            PointKind::OA => "OA",
            PointKind::VB => "VB",
            PointKind::HB => "HB",
            PointKind::VT => "VT",
            PointKind::HT => "HT",
            PointKind::VA => "VA",
            PointKind::HA => "HA",
            PointKind::CC => "CC",
        }
    }

    /// `(vertical line status, horizontal line status)` at a point of this kind.
    pub fn statuses(self) -> (LineStatus, LineStatus) {
        use LineStatus::*;
        match self {
            PointKind::VE => (Start, Absent),
            PointKind::VS => (End, Absent),
            PointKind::HE => (Absent, Start),
            PointKind::HS => (Absent, End),
            PointKind::OB => (Start, Start),
            PointKind::OA => (End, End),
            PointKind::VB => (Start, Through),
            PointKind::HB => (Through, Start),
            PointKind::VT => (Start, End),
            PointKind::HT => (End, Start),
            PointKind::VA => (End, Through),
            PointKind::HA => (Through, End),
            PointKind::CC => (Through, Through),
        }
    }

    pub fn from_statuses(vertical: LineStatus, horizontal: LineStatus) -> Option<PointKind> {
        PointKind::ALL.into_iter().find(|k| k.statuses() == (vertical, horizontal))
    }

    /// Kinds allowed at the start (`lo`) or end (`hi`) of a segment.
    pub fn allowed_at(self, orientation: Orientation, end: SegmentEnd) -> bool {
        let (v, h) = self.statuses();
        let own = match orientation {
            Orientation::Vertical => v,
            Orientation::Horizontal => h,
        };
        match end {
            SegmentEnd::Lo => own == LineStatus::Start,
            SegmentEnd::Hi => own == LineStatus::End,
        }
    }
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentEnd {
    Lo,
    Hi,
}

impl fmt::Display for SegmentEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SegmentEnd::Lo => "start",
            SegmentEnd::Hi => "end",
        })
    }
}

/// A maximal piece of one line. Verticals are anchored at an abscissa and
/// run from `lo` to `hi` in y; horizontals are anchored at an ordinate and
/// run in x. Lines always travel from `lo` to `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Segment {
    pub orientation: Orientation,
    pub anchor: f64,
    pub lo: f64,
    pub hi: f64,
    pub lo_kind: PointKind,
    pub hi_kind: PointKind,
}

impl Segment {
    pub fn vertical(x: f64, lo: f64, hi: f64, lo_kind: PointKind, hi_kind: PointKind) -> Self {
        Segment { orientation: Orientation::Vertical, anchor: x, lo, hi, lo_kind, hi_kind }
    }

    pub fn horizontal(y: f64, lo: f64, hi: f64, lo_kind: PointKind, hi_kind: PointKind) -> Self {
        Segment { orientation: Orientation::Horizontal, anchor: y, lo, hi, lo_kind, hi_kind }
    }

    pub fn is_vertical(&self) -> bool {
        self.orientation == Orientation::Vertical
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Point at coordinate `t` along the segment's axis of travel.
    pub fn point_at(&self, t: f64) -> Point {
        match self.orientation {
            Orientation::Vertical => Point::new(self.anchor, t),
            Orientation::Horizontal => Point::new(t, self.anchor),
        }
    }

    pub fn start(&self) -> Point {
        self.point_at(self.lo)
    }

    pub fn end(&self) -> Point {
        self.point_at(self.hi)
    }

    /// Status of this segment's line at coordinate `t` of its axis, assuming
    /// `lo <= t <= hi`.
    fn status_at(&self, t: f64) -> LineStatus {
        if t == self.lo {
            LineStatus::Start
        } else if t == self.hi {
            LineStatus::End
        } else {
            LineStatus::Through
        }
    }
}

/// A finite space-time diagram on a rectangle.
///
/// Segments are kept in canonical order (verticals by abscissa, then
/// horizontals by ordinate) and crossings sorted by `(x, y)`, so structural
/// equality is meaningful.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub rect: Rectangle,
    pub segments: Vec<Segment>,
    pub crossings: Vec<Point>,
}

impl Configuration {
    pub fn new(rect: Rectangle, segments: Vec<Segment>, crossings: Vec<Point>) -> Self {
        let mut c = Configuration { rect, segments, crossings };
        c.canonicalize();
        c
    }

    pub fn empty(rect: Rectangle) -> Self {
        Configuration { rect, segments: Vec::new(), crossings: Vec::new() }
    }

    pub fn canonicalize(&mut self) {
        self.segments.sort_by(|a, b| {
            a.orientation.cmp(&b.orientation).then(a.anchor.total_cmp(&b.anchor)).then(a.lo.total_cmp(&b.lo))
        });
        self.crossings.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn verticals(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| s.is_vertical())
    }

    pub fn horizontals(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| !s.is_vertical())
    }
}

/// One violated structural clause of a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum Violation {
    NonFiniteCoordinate { segment: usize },
    DegenerateSegment { segment: usize },
    AnchorOutsideInterior { segment: usize },
    EndpointOutsideRectangle { segment: usize },
    IllegalKind { segment: usize, end: SegmentEnd, kind: PointKind },
    DanglingEndpoint { segment: usize, end: SegmentEnd },
    DuplicateAnchor { orientation: Orientation, first: usize, second: usize },
    CrossingNotInterior { crossing: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFiniteCoordinate { segment } => {
                write!(f, "segment {segment} has a non-finite coordinate")
            }
            Violation::DegenerateSegment { segment } => {
                write!(f, "segment {segment} has lo >= hi")
            }
            Violation::AnchorOutsideInterior { segment } => {
                write!(f, "segment {segment} is anchored outside the open rectangle")
            }
            Violation::EndpointOutsideRectangle { segment } => {
                write!(f, "segment {segment} leaves the rectangle")
            }
            Violation::IllegalKind { segment, end, kind } => {
                write!(f, "segment {segment} cannot {end} with a {kind} point")
            }
            Violation::DanglingEndpoint { segment, end } => {
                write!(f, "dangling endpoint: {end} of segment {segment} is neither on an edge nor on a segment")
            }
            Violation::DuplicateAnchor { orientation, first, second } => {
                write!(f, "duplicate {orientation:?} anchor shared by segments {first} and {second}")
            }
            Violation::CrossingNotInterior { crossing } => {
                write!(f, "crossing {crossing} is not interior to a vertical and a horizontal segment")
            }
        }
    }
}

/// Exact-coordinate lookup of segments by anchor, per orientation.
struct AnchorIndex<'a> {
    segments: &'a [Segment],
    vertical: HashMap<u64, usize>,
    horizontal: HashMap<u64, usize>,
}

fn key(v: f64) -> u64 {
    // Normalise -0.0 so that it matches 0.0.
    (v + 0.0).to_bits()
}

impl<'a> AnchorIndex<'a> {
    fn new(segments: &'a [Segment]) -> Self {
        let mut vertical = HashMap::new();
        let mut horizontal = HashMap::new();
        for (i, s) in segments.iter().enumerate() {
            let map = if s.is_vertical() { &mut vertical } else { &mut horizontal };
            map.entry(key(s.anchor)).or_insert(i);
        }
        AnchorIndex { segments, vertical, horizontal }
    }

    /// The segment of `orientation` covering `point`, if any.
    fn covering(&self, orientation: Orientation, point: Point) -> Option<&'a Segment> {
        let (map, anchor, along) = match orientation {
            Orientation::Vertical => (&self.vertical, point.x, point.y),
            Orientation::Horizontal => (&self.horizontal, point.y, point.x),
        };
        let s = &self.segments[*map.get(&key(anchor))?];
        (s.lo <= along && along <= s.hi).then_some(s)
    }
}

/// Lists every violated structural clause; an empty list means the
/// configuration is valid.
pub fn validate_configuration(u: &Configuration) -> Vec<Violation> {
    let rect = u.rect;
    let mut out = Vec::new();

    for (i, s) in u.segments.iter().enumerate() {
        if ![s.anchor, s.lo, s.hi].iter().all(|v| v.is_finite()) {
            out.push(Violation::NonFiniteCoordinate { segment: i });
            continue;
        }
        if s.lo >= s.hi {
            out.push(Violation::DegenerateSegment { segment: i });
        }
        let (a_lo, a_hi, t_lo, t_hi) = match s.orientation {
            Orientation::Vertical => (rect.x0, rect.x1, rect.y0, rect.y1),
            Orientation::Horizontal => (rect.y0, rect.y1, rect.x0, rect.x1),
        };
        if !(a_lo < s.anchor && s.anchor < a_hi) {
            out.push(Violation::AnchorOutsideInterior { segment: i });
        }
        if s.lo < t_lo || s.hi > t_hi {
            out.push(Violation::EndpointOutsideRectangle { segment: i });
        }
        for (end, kind) in [(SegmentEnd::Lo, s.lo_kind), (SegmentEnd::Hi, s.hi_kind)] {
            if !kind.allowed_at(s.orientation, end) {
                out.push(Violation::IllegalKind { segment: i, end, kind });
            }
        }
    }

    for orientation in [Orientation::Vertical, Orientation::Horizontal] {
        let mut idx: Vec<usize> = (0..u.segments.len()).filter(|&i| u.segments[i].orientation == orientation).collect();
        idx.sort_by(|&a, &b| u.segments[a].anchor.total_cmp(&u.segments[b].anchor));
        for w in idx.windows(2) {
            if u.segments[w[0]].anchor == u.segments[w[1]].anchor {
                out.push(Violation::DuplicateAnchor { orientation, first: w[0], second: w[1] });
            }
        }
    }

    let index = AnchorIndex::new(&u.segments);
    for (i, s) in u.segments.iter().enumerate() {
        let (other, t_lo, t_hi) = match s.orientation {
            Orientation::Vertical => (Orientation::Horizontal, rect.y0, rect.y1),
            Orientation::Horizontal => (Orientation::Vertical, rect.x0, rect.x1),
        };
        if s.lo != t_lo && index.covering(other, s.start()).is_none() {
            out.push(Violation::DanglingEndpoint { segment: i, end: SegmentEnd::Lo });
        }
        if s.hi != t_hi && index.covering(other, s.end()).is_none() {
            out.push(Violation::DanglingEndpoint { segment: i, end: SegmentEnd::Hi });
        }
    }

    for (i, c) in u.crossings.iter().enumerate() {
        let interior_to = |o: Orientation| {
            index.covering(o, *c).is_some_and(|s| {
                let t = if s.is_vertical() { c.y } else { c.x };
                s.lo < t && t < s.hi
            })
        };
        if !(interior_to(Orientation::Vertical) && interior_to(Orientation::Horizontal)) {
            out.push(Violation::CrossingNotInterior { crossing: i });
        }
    }
    out
}

fn ensure_valid(u: &Configuration) -> Result<()> {
    let violations = validate_configuration(u);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidConfiguration(violations))
    }
}

/// Kind of each segment endpoint recomputed from geometry alone, as
/// `(lo kind, hi kind)` per segment. Assumes a valid configuration.
fn geometric_endpoint_kinds(u: &Configuration) -> Vec<(PointKind, PointKind)> {
    let rect = u.rect;
    let index = AnchorIndex::new(&u.segments);
    u.segments
        .iter()
        .map(|s| {
            let classify = |end: SegmentEnd| {
                let (point, own) = match end {
                    SegmentEnd::Lo => (s.start(), LineStatus::Start),
                    SegmentEnd::Hi => (s.end(), LineStatus::End),
                };
                let on_edge = match (s.orientation, end) {
                    (Orientation::Vertical, SegmentEnd::Lo) => point.y == rect.y0,
                    (Orientation::Vertical, SegmentEnd::Hi) => point.y == rect.y1,
                    (Orientation::Horizontal, SegmentEnd::Lo) => point.x == rect.x0,
                    (Orientation::Horizontal, SegmentEnd::Hi) => point.x == rect.x1,
                };
                let other_status = if on_edge {
                    LineStatus::Absent
                } else {
                    let other = match s.orientation {
                        Orientation::Vertical => Orientation::Horizontal,
                        Orientation::Horizontal => Orientation::Vertical,
                    };
                    let o = index.covering(other, point).expect("valid configurations have no dangling endpoints");
                    o.status_at(if o.is_vertical() { point.y } else { point.x })
                };
                let (v, h) = match s.orientation {
                    Orientation::Vertical => (own, other_status),
                    Orientation::Horizontal => (other_status, own),
                };
                PointKind::from_statuses(v, h).expect("every endpoint status pair names a kind")
            };
            (classify(SegmentEnd::Lo), classify(SegmentEnd::Hi))
        })
        .collect()
}

/// Every geometric crossing: interior to one vertical and one horizontal.
fn geometric_crossings(u: &Configuration) -> Vec<Point> {
    let mut horizontals: Vec<&Segment> = u.horizontals().collect();
    horizontals.sort_by(|a, b| a.anchor.total_cmp(&b.anchor));
    let mut out = Vec::new();
    for v in u.verticals() {
        let start = horizontals.partition_point(|h| h.anchor <= v.lo);
        for h in horizontals[start..].iter().take_while(|h| h.anchor < v.hi) {
            if h.lo < v.anchor && v.anchor < h.hi {
                out.push(Point::new(v.anchor, h.anchor));
            }
        }
    }
    out.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    out
}

/// Classifies every event point of `u` from geometry, independently of the
/// stored endpoint labels and crossing list.
///
/// Points shared by two segment endpoints (`OB`, `OA`, `VT`, `HT`) are
/// reported once.
pub fn classify_points(u: &Configuration) -> Result<Vec<(Point, PointKind)>> {
    ensure_valid(u)?;
    let kinds = geometric_endpoint_kinds(u);
    let mut out = Vec::new();
    for (s, &(lo, hi)) in u.segments.iter().zip(&kinds) {
        for (point, kind) in [(s.start(), lo), (s.end(), hi)] {
            // Shared points are reported from the vertical side only.
            let shared = matches!(kind, PointKind::OB | PointKind::OA | PointKind::VT | PointKind::HT);
            if s.is_vertical() || !shared {
                out.push((point, kind));
            }
        }
    }
    out.extend(geometric_crossings(u).into_iter().map(|p| (p, PointKind::CC)));
    Ok(out)
}

/// A stored label that disagrees with the geometric classification.
#[derive(Debug, Clone, PartialEq)]
pub enum LabelMismatch {
    Endpoint { segment: usize, end: SegmentEnd, stored: PointKind, geometric: PointKind },
    Crossings { stored: usize, geometric: usize },
}

/// Compares stored endpoint kinds and crossings with geometry.
pub fn label_mismatches(u: &Configuration) -> Result<Vec<LabelMismatch>> {
    ensure_valid(u)?;
    let mut out = Vec::new();
    for (i, (s, (lo, hi))) in u.segments.iter().zip(geometric_endpoint_kinds(u)).enumerate() {
        if s.lo_kind != lo {
            out.push(LabelMismatch::Endpoint { segment: i, end: SegmentEnd::Lo, stored: s.lo_kind, geometric: lo });
        }
        if s.hi_kind != hi {
            out.push(LabelMismatch::Endpoint { segment: i, end: SegmentEnd::Hi, stored: s.hi_kind, geometric: hi });
        }
    }
    let mut stored = u.crossings.clone();
    stored.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let geometric = geometric_crossings(u);
    if stored != geometric {
        out.push(LabelMismatch::Crossings { stored: stored.len(), geometric: geometric.len() });
    }
    Ok(out)
}

/// Segment counts, the thirteen point counts and total segment lengths.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConfigStats {
    pub n: u32,
    pub m: u32,
    #[serde(rename = "VE")]
    pub ve: u32,
    #[serde(rename = "VS")]
    pub vs: u32,
    #[serde(rename = "HE")]
    pub he: u32,
    #[serde(rename = "HS")]
    pub hs: u32,
    #[serde(rename = "OB")]
    pub ob: u32,
    #[serde(rename = "OA")]
    pub oa: u32,
    #[serde(rename = "VB")]
    pub vb: u32,
    #[serde(rename = "HB")]
    pub hb: u32,
    #[serde(rename = "VT")]
    pub vt: u32,
    #[serde(rename = "HT")]
    pub ht: u32,
    #[serde(rename = "VA")]
    pub va: u32,
    #[serde(rename = "HA")]
    pub ha: u32,
    #[serde(rename = "CC")]
    pub cc: u32,
    #[serde(rename = "LV")]
    pub lv: f64,
    #[serde(rename = "LH")]
    pub lh: f64,
}

impl ConfigStats {
    pub fn count(&self, kind: PointKind) -> u32 {
        self.counts()[kind.index()]
    }

    /// Counts indexed by [`PointKind::index`].
    pub fn counts(&self) -> [u32; 13] {
        [
            self.ve, self.vs, self.he, self.hs, self.ob, self.oa, self.vb, self.hb, self.vt, self.ht, self.va, self.ha,
            self.cc,
        ]
    }

    fn count_mut(&mut self, kind: PointKind) -> &mut u32 {
        match kind {
            PointKind::VE => &mut self.ve,
            PointKind::VS => &mut self.vs,
            PointKind::HE => &mut self.he,
            PointKind::HS => &mut self.hs,
            PointKind::OB => &mut self.ob,
            PointKind::OA => &mut self.oa,
            PointKind::VB => &mut self.vb,
            PointKind::HB => &mut self.hb,
            PointKind::VT => &mut self.vt,
            PointKind::HT => &mut self.ht,
            PointKind::VA => &mut self.va,
            PointKind::HA => &mut self.ha,
            PointKind::CC => &mut self.cc,
        }
    }

    /// `(n, m, counts...)` as one integer vector, for categorical tests.
    pub fn feature_vector(&self) -> Vec<u32> {
        let mut v = vec![self.n, self.m];
        v.extend(self.counts());
        v
    }

    /// Both point-balance identities: every segment has one start and one end.
    pub fn satisfies_balance(&self) -> bool {
        self.he + self.ht + self.hb + self.ob == self.m
            && self.hs + self.oa + self.ha + self.vt == self.m
            && self.ve + self.vt + self.vb + self.ob == self.n
            && self.vs + self.oa + self.va + self.ht == self.n
    }

    /// Stats of a configuration whose kind counts are obtained by reading
    /// `source_of(k)` of `self` for every kind `k`.
    pub fn pulled_back(&self, source_of: impl Fn(PointKind) -> PointKind, swap_axes: bool) -> Self {
        let mut out = ConfigStats::default();
        for k in PointKind::ALL {
            *out.count_mut(k) = self.count(source_of(k));
        }
        if swap_axes {
            out.n = self.m;
            out.m = self.n;
            out.lv = self.lh;
            out.lh = self.lv;
        } else {
            out.n = self.n;
            out.m = self.m;
            out.lv = self.lv;
            out.lh = self.lh;
        }
        out
    }
}

/// Counts every point kind from geometry and sums segment lengths.
pub fn extract_stats(u: &Configuration) -> Result<ConfigStats> {
    let points = classify_points(u)?;
    let mut stats = ConfigStats::default();
    for (_, kind) in points {
        *stats.count_mut(kind) += 1;
    }
    stats.n = u.verticals().count() as u32;
    stats.m = u.horizontals().count() as u32;
    (stats.lv, stats.lh) = total_lengths(u);
    Ok(stats)
}

/// Total lengths `(LV, LH)`, summed in increasing order so the result does
/// not depend on how the segments are listed.
pub fn total_lengths(u: &Configuration) -> (f64, f64) {
    let sum = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.into_iter().fold(0.0, |a, b| a + b)
    };
    (sum(u.verticals().map(Segment::length).collect()), sum(u.horizontals().map(Segment::length).collect()))
}

/// Clips `u` to `sub`; pieces cut by the window edges start as entries and
/// finish as exits.
pub fn restrict(u: &Configuration, sub: Rectangle) -> Result<Configuration> {
    if !u.rect.contains_rect(&sub) {
        return Err(Error::NotContained);
    }
    let mut segments = Vec::new();
    for s in &u.segments {
        let (a_lo, a_hi, t_lo, t_hi, entry, exit) = match s.orientation {
            Orientation::Vertical => (sub.x0, sub.x1, sub.y0, sub.y1, PointKind::VE, PointKind::VS),
            Orientation::Horizontal => (sub.y0, sub.y1, sub.x0, sub.x1, PointKind::HE, PointKind::HS),
        };
        if !(a_lo < s.anchor && s.anchor < a_hi) {
            continue;
        }
        let (lo, lo_kind) = if s.lo < t_lo { (t_lo, entry) } else { (s.lo, s.lo_kind) };
        let (hi, hi_kind) = if s.hi > t_hi { (t_hi, exit) } else { (s.hi, s.hi_kind) };
        if lo < hi {
            segments.push(Segment { lo, hi, lo_kind, hi_kind, ..*s });
        }
    }
    let crossings = u.crossings.iter().copied().filter(|c| sub.contains_interior(*c)).collect();
    Ok(Configuration::new(sub, segments, crossings))
}
