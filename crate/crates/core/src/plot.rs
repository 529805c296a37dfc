//! Deterministic SVG figures: the deltoid with trace points or trajectories,
//! and the 18-gon in the disk model.

use std::fmt::Write;

use crate::isometry::{deltoid_point, IsometryClass};
use crate::linalg::{c, C64};
use crate::realhyp::{point_along, to_disk, ChordSystem, GeodesicH2, Gon18};

pub const CANVAS: f64 = 1000.0;

/// An SVG document on a fixed square canvas. Elements are written in call
/// order, so callers control the stroke order.
pub struct Svg {
    body: String,
}

impl Default for Svg {
    fn default() -> Self {
        Self::new()
    }
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

impl Svg {
    pub fn new() -> Self {
        Self { body: String::new() }
    }

    pub fn polyline(&mut self, id: &str, pts: &[(f64, f64)], stroke: &str, width: f64, closed: bool) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", fmt(*x), fmt(*y))).collect();
        let tag = if closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            self.body,
            r#"<{tag} id="{id}" points="{}" fill="none" stroke="{stroke}" stroke-width="{}"/>"#,
            coords.join(" "),
            fmt(width)
        );
    }

    pub fn circle(&mut self, id: &str, (x, y): (f64, f64), r: f64, stroke: &str, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle id="{id}" cx="{}" cy="{}" r="{}" fill="{fill}" stroke="{stroke}"/>"#,
            fmt(x),
            fmt(y),
            fmt(r)
        );
    }

    pub fn text(&mut self, (x, y): (f64, f64), size: f64, content: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-size="{}" font-family="monospace">{content}</text>"#,
            fmt(x),
            fmt(y),
            fmt(size)
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\">\n\
             <rect width=\"{c}\" height=\"{c}\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            c = CANVAS as u32
        )
    }
}

/// Maps the square `[-half, half]²` of the complex plane onto the canvas.
#[derive(Debug, Clone, Copy)]
pub struct Window {
    pub center: C64,
    pub half: f64,
}

impl Window {
    pub fn map(&self, z: C64) -> (f64, f64) {
        let s = CANVAS / (2.0 * self.half);
        (CANVAS / 2.0 + (z.re - self.center.re) * s, CANVAS / 2.0 - (z.im - self.center.im) * s)
    }
}

const TRACE_WINDOW: Window = Window { center: C64 { re: 0.0, im: 0.0 }, half: 6.0 };

fn deltoid(svg: &mut Svg, w: &Window) {
    let pts: Vec<(f64, f64)> =
        (0..=720).map(|k| w.map(deltoid_point(k as f64 * std::f64::consts::TAU / 720.0))).collect();
    svg.polyline("deltoid", &pts, "black", 1.5, true);
}

fn class_color(class: &IsometryClass) -> &'static str {
    match class {
        IsometryClass::Hyperbolic => "#1f77b4",
        IsometryClass::RegularElliptic => "#d62728",
        IsometryClass::Boundary(_) => "#2ca02c",
    }
}

/// The deltoid with one dot per trace, colored by class.
pub fn deltoid_svg(points: &[(C64, IsometryClass)]) -> String {
    let mut svg = Svg::new();
    deltoid(&mut svg, &TRACE_WINDOW);
    for (k, (z, class)) in points.iter().enumerate() {
        svg.circle(&format!("trace-{k:05}"), TRACE_WINDOW.map(*z), 3.0, "none", class_color(class));
    }
    svg.finish()
}

/// The deltoid with a trace trajectory, e.g. `tr(W_B)` along an α scan, and
/// an optional highlighted point.
pub fn trajectory_svg(path: &[C64], mark: Option<C64>) -> String {
    let mut svg = Svg::new();
    deltoid(&mut svg, &TRACE_WINDOW);
    let pts: Vec<(f64, f64)> = path.iter().map(|z| TRACE_WINDOW.map(*z)).collect();
    svg.polyline("trajectory", &pts, "#1f77b4", 2.0, false);
    if let Some(m) = mark {
        svg.circle("transition", TRACE_WINDOW.map(m), 6.0, "#d62728", "none");
    }
    svg.finish()
}

const DISK_WINDOW: Window = Window { center: C64 { re: 0.0, im: 0.0 }, half: 1.05 };

fn segment(z: C64, w: C64, samples: usize) -> Vec<(f64, f64)> {
    let d = crate::realhyp::hdist(z, w);
    (0..=samples).map(|k| DISK_WINDOW.map(to_disk(point_along(z, w, d * k as f64 / samples as f64)))).collect()
}

fn full_geodesic(g: &GeodesicH2, samples: usize) -> Vec<(f64, f64)> {
    let inv = g.normalizer().inverse();
    (0..=samples)
        .map(|k| {
            let s = -12.0 + 24.0 * k as f64 / samples as f64;
            DISK_WINDOW.map(to_disk(inv.apply(c(0.0, s.exp()))))
        })
        .collect()
}

/// The 18-gon in the disk, its triangulation from the center, the traced
/// chords and the axis.
pub fn gon18_svg(gon: &Gon18, chords: &ChordSystem, axis: &GeodesicH2) -> String {
    let mut svg = Svg::new();
    let circle: Vec<(f64, f64)> =
        (0..=360).map(|k| DISK_WINDOW.map(C64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 360.0))).collect();
    svg.polyline("boundary", &circle, "#999999", 1.0, true);
    let poly = &gon.polygon;
    for i in 0..poly.len() {
        svg.polyline(
            &format!("spoke-{i:02}"),
            &segment(crate::realhyp::ORIGIN, poly.vertices[i], 16),
            "#dddddd",
            0.8,
            false,
        );
    }
    for i in 0..poly.len() {
        let (a, b) = poly.side(i);
        svg.polyline(&format!("side-{i:02}"), &segment(a, b, 32), "black", 1.5, false);
    }
    svg.polyline("axis", &full_geodesic(axis, 200), "#2ca02c", 1.0, false);
    for (k, ch) in chords.chords.iter().enumerate() {
        svg.polyline(&format!("chord-{k:02}"), &segment(ch.entry, ch.exit, 32), "#d62728", 1.5, false);
    }
    for (i, v) in poly.vertices.iter().enumerate() {
        let (x, y) = DISK_WINDOW.map(to_disk(*v));
        svg.text((x + 4.0, y - 4.0), 14.0, &format!("A{}", i + 1));
    }
    svg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realhyp::{axis_of, build_18gon, trace_axis_chords};

    #[test]
    fn gon_figure_is_deterministic() {
        let gon = build_18gon().unwrap();
        let axis = axis_of(&gon.triangle.evaluate(&[1, 3, 2, 3])).unwrap();
        let chords = trace_axis_chords(&gon, &axis, 100).unwrap();
        let a = gon18_svg(&gon, &chords, &axis);
        let b = gon18_svg(&gon, &chords, &axis);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.contains(r#"width="1000""#));
        assert_eq!(a.matches("id=\"chord-").count(), 18);
        assert_eq!(a.matches("id=\"side-").count(), 18);
    }

    #[test]
    fn window_mapping() {
        let w = Window { center: c(0.0, 0.0), half: 1.0 };
        assert_eq!(w.map(c(0.0, 0.0)), (500.0, 500.0));
        assert_eq!(w.map(c(1.0, 1.0)), (1000.0, 0.0));
        assert_eq!(fmt(-0.0001), "0.000");
    }

    #[test]
    fn trace_figures() {
        let s = deltoid_svg(&[(c(3.0, 0.0), IsometryClass::Hyperbolic), (c(0.0, 0.0), IsometryClass::RegularElliptic)]);
        assert!(s.contains("trace-00001"));
        let t = trajectory_svg(&[c(0.0, 0.0), c(1.0, 1.0)], Some(c(1.0, 1.0)));
        assert!(t.contains("transition"));
    }
}
