//! SVG 1.1 drawings of diagrams: black segments, filled dots where
//! segments are created and open dots where they are annihilated.

use std::fmt::Write;

use bulletlab_core::{classify_points, Configuration, PointKind};

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgStyle {
    /// Pixels along the longer side of the rectangle.
    pub size: f64,
    pub margin: f64,
    /// Also mark births on an existing segment (VB, HB) and turns.
    pub mark_all_births: bool,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { size: 600.0, margin: 10.0, mark_all_births: false }
    }
}

fn is_death(k: PointKind) -> bool {
    matches!(k, PointKind::OA | PointKind::VA | PointKind::HA)
}

fn is_birth(k: PointKind, all: bool) -> bool {
    match k {
        PointKind::OB => true,
        PointKind::VB | PointKind::HB | PointKind::VT | PointKind::HT => all,
        _ => false,
    }
}

pub fn render_svg(u: &Configuration, style: &SvgStyle) -> CliResult<String> {
    let points = classify_points(u)?;
    let r = u.rect;
    let scale = style.size / r.width().max(r.height());
    let m = style.margin;
    let (w, h) = (r.width() * scale + 2.0 * m, r.height() * scale + 2.0 * m);
    let px = |x: f64| m + (x - r.x0()) * scale;
    let py = |y: f64| m + (r.y1() - y) * scale;
    let dot = (style.size / 200.0).max(1.5);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">"
    );
    let _ = writeln!(
        out,
        "<rect class=\"frame\" x=\"{m:.2}\" y=\"{m:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"gray\"/>",
        r.width() * scale,
        r.height() * scale
    );
    for s in &u.segments {
        let (a, b) = (s.start(), s.end());
        let class = if s.is_vertical() { "vertical" } else { "horizontal" };
        let _ = writeln!(
            out,
            "<line class=\"{class}\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            px(a.x),
            py(a.y),
            px(b.x),
            py(b.y)
        );
    }
    for (p, k) in &points {
        let (class, fill) = if is_birth(*k, style.mark_all_births) {
            ("birth", "black")
        } else if is_death(*k) {
            ("death", "white")
        } else {
            continue;
        };
        let _ = writeln!(
            out,
            "<circle class=\"{class}\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"{dot:.2}\" fill=\"{fill}\" stroke=\"black\"/>",
            px(p.x),
            py(p.y)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bulletlab_core::PointKind::*;
    use bulletlab_core::{Rectangle, Segment};

    fn unit() -> Rectangle {
        Rectangle::new(0.0, 0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn empty_is_frame_only() {
        let s = render_svg(&Configuration::empty(unit()), &SvgStyle::default()).unwrap();
        assert_eq!(s.matches("<rect").count(), 1);
        assert!(!s.contains("<line") && !s.contains("<circle"));
    }

    #[test]
    fn annihilation_has_one_open_dot() {
        let u = Configuration::new(
            unit(),
            vec![Segment::vertical(0.5, 0.0, 0.3, VE, OA), Segment::horizontal(0.3, 0.0, 0.5, HE, OA)],
            vec![],
        );
        let s = render_svg(&u, &SvgStyle::default()).unwrap();
        assert_eq!(s.matches("<line").count(), 2);
        assert_eq!(s.matches("class=\"death\"").count(), 1);
        assert_eq!(s.matches("class=\"birth\"").count(), 0);
    }

    #[test]
    fn turns_are_marked_on_request() {
        let u = Configuration::new(
            unit(),
            vec![Segment::horizontal(0.5, 0.0, 0.5, HE, VT), Segment::vertical(0.5, 0.5, 1.0, VT, VS)],
            vec![],
        );
        let plain = render_svg(&u, &SvgStyle::default()).unwrap();
        assert!(!plain.contains("<circle"));
        let style = SvgStyle { mark_all_births: true, ..SvgStyle::default() };
        assert_eq!(render_svg(&u, &style).unwrap().matches("class=\"birth\"").count(), 1);
    }
}
