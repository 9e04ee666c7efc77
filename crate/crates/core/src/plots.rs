//! CSV and minimal SVG renderings of histograms and transfer curves.

use std::fmt::Write as _;

use crate::pipeline::format_real;
use crate::statistics::Histogram;
use crate::transfer::{eval_transfer, TransferFunction};

/// Side of the square SVG viewport.
pub const VIEWPORT: f64 = 512.0;
/// Polyline samples in [`curve_svg`].
pub const CURVE_SVG_SAMPLES: usize = 256;
const NODE_RADIUS: f64 = 4.0;

/// `level,count` rows, one per bin.
pub fn histogram_csv(h: &Histogram) -> Vec<u8> {
    let mut out = String::from("level,count\n");
    for (level, count) in h.bins().iter().enumerate() {
        writeln!(out, "{level},{count}").unwrap();
    }
    out.into_bytes()
}

/// `samples` evenly spaced `x` values on `[x1, x2]` (both included).
fn curve_points(t: &TransferFunction, samples: usize) -> Vec<(f64, f64)> {
    let samples = samples.max(2);
    let (x1, x2) = (t.nodes().x1(), t.nodes().x2());
    let last = samples - 1;
    (0..samples)
        .map(|i| {
            let x = if i == last {
                x2
            } else {
                x1 + (x2 - x1) * i as f64 / last as f64
            };
            (x, eval_transfer(t, x))
        })
        .collect()
}

/// `x,g` rows sampling the curve on `[x1, x2]`. `samples` below 2 is
/// raised to 2.
pub fn curve_csv(t: &TransferFunction, samples: usize) -> Vec<u8> {
    let mut out = String::from("x,g\n");
    for (x, g) in curve_points(t, samples) {
        writeln!(out, "{},{}", format_real(x), format_real(g)).unwrap();
    }
    out.into_bytes()
}

fn to_view(x: f64, y: f64) -> (f64, f64) {
    (x * VIEWPORT, (1.0 - y) * VIEWPORT)
}

fn svg_open(out: &mut String) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{v}" height="{v}" viewBox="0 0 {v} {v}">"#,
        v = VIEWPORT
    )
    .unwrap();
}

/// The curve as a polyline over the unit square, with a circle on each
/// of the four interpolation points.
pub fn curve_svg(t: &TransferFunction) -> Vec<u8> {
    let mut out = String::new();
    svg_open(&mut out);
    writeln!(
        out,
        r#"  <path d="M0,{v} L{v},{v} M0,{v} L0,0" stroke="gray" stroke-width="1" fill="none"/>"#,
        v = VIEWPORT
    )
    .unwrap();
    let points: Vec<String> = curve_points(t, CURVE_SVG_SAMPLES)
        .into_iter()
        .map(|(x, g)| {
            let (px, py) = to_view(x, g);
            format!("{px:.3},{py:.3}")
        })
        .collect();
    writeln!(
        out,
        r#"  <polyline points="{}" stroke="black" stroke-width="1.5" fill="none"/>"#,
        points.join(" ")
    )
    .unwrap();
    let nodes = t.nodes().as_array();
    let targets = t.targets().as_array();
    for (x, g) in nodes.into_iter().zip(targets) {
        let (cx, cy) = to_view(x, g);
        writeln!(
            out,
            r#"  <circle cx="{cx:.3}" cy="{cy:.3}" r="{NODE_RADIUS}" stroke="red" fill="none"/>"#
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out.into_bytes()
}

/// Bar chart with one bar per non-empty bin; the tallest bar spans the
/// full height.
pub fn histogram_svg(h: &Histogram) -> Vec<u8> {
    let mut out = String::new();
    svg_open(&mut out);
    let peak = h.bins().iter().copied().max().unwrap_or(0).max(1) as f64;
    let width = VIEWPORT / h.bins().len() as f64;
    for (level, &count) in h.bins().iter().enumerate() {
        if count == 0 {
            continue;
        }
        let height = VIEWPORT * count as f64 / peak;
        writeln!(
            out,
            r#"  <rect x="{:.4}" y="{:.4}" width="{:.4}" height="{:.4}" fill="black"/>"#,
            level as f64 * width,
            VIEWPORT - height,
            width,
            height
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out.into_bytes()
}
