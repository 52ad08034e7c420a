//! Deterministic SVG rendering of the marked circle with a set of arcs.
//!
//! Accumulation point `j` sits at angle `2πj/n`; regular point `(j, k)` is
//! placed inside interval `j` by a logistic map of `k`, monotone and
//! converging to the interval ends. Output bytes depend only on the inputs.

use std::fmt::Write as _;

use crate::oracle::Window;
use crate::surface::{Arc, MarkedPoint, ModelParams};
use crate::triangulation::FanTriangulation;

/// Steepness of the logistic spacing of regular points inside an interval.
/// Purely presentational.
const LOGISTIC_SCALE: f64 = 1.0;

/// Style and placement options for a figure.
#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub width: u32,
    pub stroke_width: f64,
    pub label_points: bool,
    pub window: Window,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { width: 640, stroke_width: 1.5, label_points: false, window: Window(6) }
    }
}

fn angle_of(params: ModelParams, p: MarkedPoint) -> f64 {
    let n = params.n() as f64;
    let span = std::f64::consts::TAU / n;
    match p {
        MarkedPoint::Accumulation { interval } => span * interval as f64,
        MarkedPoint::Regular { interval, position } => {
            let sigma = 1.0 / (1.0 + (-(position as f64) / LOGISTIC_SCALE).exp());
            span * (interval as f64 + sigma)
        }
    }
}

struct Canvas {
    size: f64,
    radius: f64,
}

impl Canvas {
    // The boundary circle is oriented anticlockwise; SVG's y axis points
    // down, so the y coordinate is mirrored.
    fn position(&self, angle: f64, r: f64) -> (f64, f64) {
        let c = self.size / 2.0;
        (c + r * angle.cos(), c - r * angle.sin())
    }

    fn point(&self, params: ModelParams, p: MarkedPoint) -> (f64, f64) {
        self.position(angle_of(params, p), self.radius)
    }
}

/// Render the window's marked points plus the given arcs. Chords are drawn as
/// quadratic curves pulled toward the centre so nested fans stay readable.
pub fn render_svg(params: ModelParams, arcs: &[Arc], spec: &RenderSpec) -> String {
    let size = spec.width as f64;
    let canvas = Canvas { size, radius: size * 0.42 };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{w}" viewBox="0 0 {w} {w}">"#,
        w = spec.width
    );
    let centre = size / 2.0;
    let _ = writeln!(
        out,
        r#"  <circle cx="{c:.4}" cy="{c:.4}" r="{r:.4}" fill="none" stroke="black" stroke-width="{sw:.4}"/>"#,
        c = centre,
        r = canvas.radius,
        sw = spec.stroke_width
    );
    for arc in arcs {
        let (p, q) = arc.endpoints();
        let (x1, y1) = canvas.point(params, p);
        let (x2, y2) = canvas.point(params, q);
        // Control point: chord midpoint pulled toward the centre, more for
        // wider chords.
        let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
        let chord = ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt();
        let pull = 0.35 * chord / (2.0 * canvas.radius);
        let (cx, cy) = (mx + (centre - mx) * pull, my + (centre - my) * pull);
        let _ = writeln!(
            out,
            r#"  <path d="M {x1:.4} {y1:.4} Q {cx:.4} {cy:.4} {x2:.4} {y2:.4}" fill="none" stroke="black" stroke-width="{sw:.4}"/>"#,
            sw = spec.stroke_width
        );
    }
    for point in crate::oracle::enumerate_points(params, spec.window) {
        let (x, y) = canvas.point(params, point);
        if point.is_accumulation() {
            let _ = writeln!(out, r#"  <circle cx="{x:.4}" cy="{y:.4}" r="5.0000" fill="black"/>"#);
        } else {
            let _ = writeln!(out, r#"  <circle cx="{x:.4}" cy="{y:.4}" r="1.8000" fill="black"/>"#);
        }
        if spec.label_points {
            let (lx, ly) = canvas.position(angle_of(params, point), canvas.radius * 1.08);
            let _ = writeln!(
                out,
                r#"  <text x="{lx:.4}" y="{ly:.4}" font-size="10" text-anchor="middle">{point}</text>"#
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Render the window-visible members of a triangulation.
pub fn render_triangulation(tri: &FanTriangulation, spec: &RenderSpec) -> String {
    let members = tri.members_in_window(spec.window);
    render_svg(tri.params(), &members, spec)
}
