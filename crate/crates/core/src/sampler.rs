//! Poisson samplers and the x-sweep simulator.
//!
//! The abscissa plays the role of time. Horizontal lines are the state: an
//! ordered map from ordinate to line. Every vertical line is resolved in one
//! go at its birth abscissa by walking up through the alive horizontals,
//! since nothing to its right can influence it.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::ops::Bound;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Configuration, Point, PointKind, Rectangle, Segment};
use crate::params::{Intensities, Parameter};
use crate::rng::RngStream;

pub const DEFAULT_MAX_EVENTS: u64 = 10_000_000;

/// Law of the boundary entry points: independent Poisson processes on the
/// two incoming edges, or fixed lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum InitialLaw {
    Ppp(Intensities),
    Explicit {
        /// Bottom-edge abscissas of vertical entries.
        cx: Vec<f64>,
        /// Left-edge ordinates of horizontal entries.
        cy: Vec<f64>,
    },
}

impl InitialLaw {
    pub fn ppp(nu_h: f64, nu_v: f64) -> Result<Self> {
        Ok(InitialLaw::Ppp(Intensities::new(nu_h, nu_v)?))
    }

    pub fn intensities(&self) -> Option<Intensities> {
        match self {
            InitialLaw::Ppp(nu) => Some(*nu),
            InitialLaw::Explicit { .. } => None,
        }
    }

    pub fn validate(&self, rect: &Rectangle) -> Result<()> {
        match self {
            InitialLaw::Ppp(nu) => Intensities::new(nu.nu_h, nu.nu_v).map(|_| ()),
            InitialLaw::Explicit { cx, cy } => {
                check_edge_points("cx", cx, rect.x0(), rect.x1())?;
                check_edge_points("cy", cy, rect.y0(), rect.y1())
            }
        }
    }
}

fn check_edge_points(name: &str, pts: &[f64], lo: f64, hi: f64) -> Result<()> {
    if let Some(p) = pts.iter().find(|&&p| !(lo < p && p < hi)) {
        return Err(Error::InvalidLaw(format!("{name} point {p} is outside ({lo}, {hi})")));
    }
    if pts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidLaw(format!("{name} is not strictly increasing")));
    }
    Ok(())
}

/// Poisson points of intensity `rate` on `(lo, hi)`, sorted, generated from
/// cumulative exponential gaps.
pub fn sample_ppp_interval(rate: f64, lo: f64, hi: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(Error::InvalidRange(format!("rate {rate} must be finite and non-negative")));
    }
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::InvalidRange(format!("empty interval ({lo}, {hi})")));
    }
    let mut out = Vec::new();
    if rate == 0.0 {
        return Ok(out);
    }
    let mut t = lo;
    loop {
        t += rng.exponential(rate);
        if t >= hi {
            return Ok(out);
        }
        if t > lo {
            out.push(t);
        }
    }
}

/// Poisson points of intensity `rate` in the open rectangle, sorted by x.
pub fn sample_ppp_rectangle(rate: f64, rect: &Rectangle, rng: &mut RngStream) -> Result<Vec<Point>> {
    let xs = sample_ppp_interval(rate * rect.height(), rect.x0(), rect.x1(), rng)?;
    Ok(xs
        .into_iter()
        .map(|x| {
            let mut y = rect.y0();
            while y == rect.y0() {
                y = rng.uniform_in(rect.y0(), rect.y1());
            }
            Point::new(x, y)
        })
        .collect())
}

/// Bottom-edge abscissas `cx` and left-edge ordinates `cy` of the entries.
pub fn sample_initial_condition(
    law: &InitialLaw,
    rect: &Rectangle,
    rng: &mut RngStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    law.validate(rect)?;
    match law {
        InitialLaw::Ppp(nu) => {
            let cx = sample_ppp_interval(nu.nu_v, rect.x0(), rect.x1(), rng)?;
            let cy = sample_ppp_interval(nu.nu_h, rect.y0(), rect.y1(), rng)?;
            Ok((cx, cy))
        }
        InitialLaw::Explicit { cx, cy } => Ok((cx.clone(), cy.clone())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EventKind {
    Entry,
    ExNihilo,
    Split { line: usize, clock: u32 },
    Turn { line: usize, clock: u32 },
}

impl EventKind {
    fn priority(self) -> u8 {
        match self {
            EventKind::Entry => 0,
            EventKind::ExNihilo => 1,
            EventKind::Split { .. } => 2,
            EventKind::Turn { .. } => 3,
        }
    }
}

type EventKey = (OrderedFloat<f64>, u8, OrderedFloat<f64>, u64);

struct HLine {
    y: f64,
    start: f64,
    lo_kind: PointKind,
    alive: bool,
    clock: u32,
}

struct Sweep<'a> {
    p: Parameter,
    rect: Rectangle,
    rng: &'a mut RngStream,
    queue: BinaryHeap<Reverse<(EventKey, EventKind)>>,
    alive: BTreeMap<OrderedFloat<f64>, usize>,
    lines: Vec<HLine>,
    segments: Vec<Segment>,
    crossings: Vec<Point>,
    seq: u64,
    events: u64,
    max_events: u64,
}

impl Sweep<'_> {
    fn tick(&mut self) -> Result<()> {
        self.events += 1;
        if self.events > self.max_events {
            return Err(Error::RunawayDiagram { max_events: self.max_events });
        }
        Ok(())
    }

    fn push(&mut self, x: f64, y: f64, kind: EventKind) {
        self.seq += 1;
        self.queue.push(Reverse(((OrderedFloat(x), kind.priority(), OrderedFloat(y), self.seq), kind)));
    }

    /// Draws the next split or turn of a horizontal line from abscissa `x`.
    fn schedule(&mut self, line: usize, x: f64) {
        let rate = self.p.horizontal_rate();
        let d = self.rng.exponential(rate);
        if !d.is_finite() {
            return;
        }
        let u = self.rng.uniform();
        let at = x + d;
        if at >= self.rect.x1() {
            return;
        }
        let l = &mut self.lines[line];
        l.clock += 1;
        let clock = l.clock;
        let y = l.y;
        let kind =
            if u * rate < self.p.lambda_h { EventKind::Split { line, clock } } else { EventKind::Turn { line, clock } };
        self.push(at, y, kind);
    }

    fn start_horizontal(&mut self, x: f64, y: f64, lo_kind: PointKind) {
        let id = self.lines.len();
        self.lines.push(HLine { y, start: x, lo_kind, alive: true, clock: 0 });
        self.alive.insert(OrderedFloat(y), id);
        self.schedule(id, x);
    }

    fn end_horizontal(&mut self, line: usize, x: f64, hi_kind: PointKind) {
        let l = &mut self.lines[line];
        l.alive = false;
        self.alive.remove(&OrderedFloat(l.y));
        self.segments.push(Segment::horizontal(l.y, l.start, x, l.lo_kind, hi_kind));
    }

    /// Walks a vertical line born at `(x, y)` up to its end.
    fn excursion(&mut self, x: f64, y: f64, lo_kind: PointKind) -> Result<()> {
        let rate = self.p.vertical_rate();
        let (lo, top) = (y, self.rect.y1());
        let mut y = y;
        let mut remaining = self.rng.exponential(rate);
        loop {
            self.tick()?;
            let next =
                self.alive.range((Bound::Excluded(OrderedFloat(y)), Bound::Unbounded)).next().map(|(k, &id)| (k.0, id));
            let own = y + remaining;
            let barrier = next.map_or(top, |(yh, _)| yh.min(top));
            if own < barrier {
                let u = self.rng.uniform();
                if u * rate < self.p.lambda_v {
                    self.start_horizontal(x, own, PointKind::HB);
                    y = own;
                    remaining = self.rng.exponential(rate);
                    continue;
                }
                self.segments.push(Segment::vertical(x, lo, own, lo_kind, PointKind::HT));
                self.start_horizontal(x, own, PointKind::HT);
                return Ok(());
            }
            let (yh, id) = match next {
                Some((yh, id)) if yh < top => (yh, id),
                _ => {
                    self.segments.push(Segment::vertical(x, lo, top, lo_kind, PointKind::VS));
                    return Ok(());
                }
            };
            remaining -= yh - y;
            y = yh;
            let u = self.rng.uniform();
            let p = self.p;
            if u < p.p_v {
                self.end_horizontal(id, x, PointKind::HA);
            } else if u < p.p_v + p.p_h {
                self.segments.push(Segment::vertical(x, lo, yh, lo_kind, PointKind::VA));
                return Ok(());
            } else if u < p.p_v + p.p_h + p.p0 {
                self.end_horizontal(id, x, PointKind::OA);
                self.segments.push(Segment::vertical(x, lo, yh, lo_kind, PointKind::OA));
                return Ok(());
            } else {
                self.crossings.push(Point::new(x, yh));
            }
        }
    }
}

/// Samples the space-time diagram of the model `params` on `rect` with
/// entries drawn from `law`.
///
/// Draw order is fixed: entries, then ex-nihilo points, then the sweep.
pub fn build_diagram(
    params: &Parameter,
    law: &InitialLaw,
    rect: &Rectangle,
    rng: &mut RngStream,
    max_events: u64,
) -> Result<Configuration> {
    params.validate()?;
    if max_events == 0 {
        return Err(Error::InvalidRange("max_events must be positive".into()));
    }
    let (cx, cy) = sample_initial_condition(law, rect, rng)?;
    let births = sample_ppp_rectangle(params.lambda0, rect, rng)?;

    let mut sweep = Sweep {
        p: *params,
        rect: *rect,
        rng,
        queue: BinaryHeap::new(),
        alive: BTreeMap::new(),
        lines: Vec::new(),
        segments: Vec::new(),
        crossings: Vec::new(),
        seq: 0,
        events: 0,
        max_events,
    };
    for &y in &cy {
        sweep.start_horizontal(rect.x0(), y, PointKind::HE);
    }
    for &x in &cx {
        sweep.push(x, rect.y0(), EventKind::Entry);
    }
    for b in &births {
        sweep.push(b.x, b.y, EventKind::ExNihilo);
    }

    while let Some(Reverse(((x, _, y, _), kind))) = sweep.queue.pop() {
        let (x, y) = (x.0, y.0);
        match kind {
            EventKind::Entry => sweep.excursion(x, y, PointKind::VE)?,
            EventKind::ExNihilo => {
                sweep.tick()?;
                sweep.start_horizontal(x, y, PointKind::OB);
                sweep.excursion(x, y, PointKind::OB)?;
            }
            EventKind::Split { line, clock } | EventKind::Turn { line, clock } => {
                let l = &sweep.lines[line];
                if !l.alive || l.clock != clock {
                    continue;
                }
                sweep.tick()?;
                if matches!(kind, EventKind::Split { .. }) {
                    sweep.schedule(line, x);
                    sweep.excursion(x, y, PointKind::VB)?;
                } else {
                    sweep.end_horizontal(line, x, PointKind::VT);
                    sweep.excursion(x, y, PointKind::VT)?;
                }
            }
        }
    }
    let rest: Vec<usize> = sweep.alive.values().copied().collect();
    for id in rest {
        sweep.end_horizontal(id, rect.x1(), PointKind::HS);
    }
    Ok(Configuration::new(*rect, sweep.segments, sweep.crossings))
}
