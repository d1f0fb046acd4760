//! Static SVG plot of a spline, its spline control polygon and the local
//! control polygons.

use std::fmt::Write as _;

use gqs::basis::{lcp, scp};
use gqs::GqsSpline;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 40.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let sx = MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN);
        let sy = HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN);
        (sx, sy)
    }

    fn polyline(&self, points: impl IntoIterator<Item = (f64, f64)>, style: &str) -> String {
        let pts: Vec<String> = points
            .into_iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        format!("  <polyline fill=\"none\" {style} points=\"{}\"/>\n", pts.join(" "))
    }
}

pub fn render(spline: &GqsSpline, curve: &[(f64, f64, f64)]) -> String {
    let polygon = scp(spline);
    let ys = curve.iter().map(|r| r.1).chain(polygon.ordinates());
    let (mut y0, mut y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    let space = spline.space();
    let frame = Frame {
        x0: space.partition().a(),
        x1: space.partition().b(),
        y0: y0 - pad,
        y1: y1 + pad,
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str("  <g id=\"lcp\">\n");
    for i in 1..=space.n() {
        let local = lcp(spline, i).expect("interval index in range");
        out.push_str(&frame.polyline(
            local.vertices().iter().copied(),
            "stroke=\"#2ca02c\" stroke-width=\"1\" stroke-dasharray=\"2,3\"",
        ));
    }
    out.push_str("  </g>\n  <g id=\"scp\">\n");
    out.push_str(&frame.polyline(
        polygon.vertices().iter().copied(),
        "stroke=\"#d62728\" stroke-width=\"1.2\" stroke-dasharray=\"6,4\"",
    ));
    for &(x, y) in polygon.vertices() {
        let (sx, sy) = frame.map((x, y));
        let _ = writeln!(out, "    <circle cx=\"{sx:.3}\" cy=\"{sy:.3}\" r=\"2.5\" fill=\"#d62728\"/>");
    }
    out.push_str("  </g>\n  <g id=\"curve\">\n");
    out.push_str(&frame.polyline(curve.iter().map(|r| (r.0, r.1)), "stroke=\"#1f77b4\" stroke-width=\"2\""));
    for &x in space.knots() {
        let (sx, _) = frame.map((x, 0.0));
        let _ = writeln!(
            out,
            "    <line x1=\"{sx:.3}\" y1=\"{:.3}\" x2=\"{sx:.3}\" y2=\"{:.3}\" stroke=\"#999\" stroke-width=\"0.5\"/>",
            HEIGHT - MARGIN,
            HEIGHT - MARGIN + 6.0
        );
    }
    out.push_str("  </g>\n</svg>\n");
    out
}
