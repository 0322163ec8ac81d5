//! Deterministic CSV, JSON and SVG writers for the engine outputs. All
//! numeric fields carry at least 12 significant digits; repeated runs with
//! the same inputs produce byte-identical documents.

use std::fmt::Write as _;

use crate::diffraction::Spectrum;
use crate::model_set::{TileKind, TypedPointSet};
use crate::window_ifs::WindowApprox;

/// Fixed float format: 13 significant digits, scientific.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.12e}")
}

/// Point-set CSV: position_float, m, n, type.
pub fn point_set_csv(points: &TypedPointSet) -> String {
    let mut out = String::from("position_float,m,n,type\n");
    for p in points.iter() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_float(p.pos.to_f64()),
            p.pos.unit_part(),
            p.pos.tau_part(),
            p.kind.letter()
        );
    }
    out
}

/// Spectrum CSV: m, n, k, re, im, I.
pub fn spectrum_csv(spectrum: &Spectrum) -> String {
    let mut out = String::from("m,n,k,re,im,I\n");
    for p in &spectrum.peaks {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.m,
            p.n,
            fmt_float(p.k),
            fmt_float(p.amplitude.re),
            fmt_float(p.amplitude.im),
            fmt_float(p.intensity)
        );
    }
    out
}

/// Spectrum JSON: an array of {"m", "n", "k", "re", "im", "I"} objects.
pub fn spectrum_json(spectrum: &Spectrum) -> String {
    let mut out = String::from("[");
    for (i, p) in spectrum.peaks.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "\n  {{\"m\": {}, \"n\": {}, \"k\": {}, \"re\": {}, \"im\": {}, \"I\": {}}}",
            p.m,
            p.n,
            fmt_float(p.k),
            fmt_float(p.amplitude.re),
            fmt_float(p.amplitude.im),
            fmt_float(p.intensity)
        );
    }
    out.push_str("\n]\n");
    out
}

/// Correlation table CSV: z_float, m, n, pair, nu.
pub fn correlation_csv(rows: &[(f64, String, String, String, f64)]) -> String {
    let mut out = String::from("z_float,m,n,pair,nu\n");
    for (z, m, n, pair, nu) in rows {
        let _ = writeln!(out, "{},{m},{n},{pair},{}", fmt_float(*z), fmt_float(*nu));
    }
    out
}

/// Window-approximant CSV: lo, hi, letter, depth.
pub fn window_intervals_csv(approx: &WindowApprox) -> String {
    let mut out = String::from("lo,hi,letter,depth\n");
    for kind in TileKind::ALL {
        for (lo, hi) in approx.intervals_f64(kind) {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_float(lo),
                fmt_float(hi),
                kind.letter(),
                approx.depth()
            );
        }
    }
    out
}

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 320.0;
const MARGIN: f64 = 40.0;

fn svg_header() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\">\n"
    )
}

/// Bar chart of a 1D spectrum over k ≥ 0: bar height proportional to
/// intensity, axis ticks every unit.
pub fn spectrum_svg(spectrum: &Spectrum, kmax: f64) -> String {
    let mut out = svg_header();
    let imax = spectrum.max_intensity().max(f64::MIN_POSITIVE);
    let x = |k: f64| MARGIN + k / kmax * (SVG_W - 2.0 * MARGIN);
    let y0 = SVG_H - MARGIN;
    let _ = writeln!(
        out,
        "  <line x1=\"{}\" y1=\"{y0}\" x2=\"{}\" y2=\"{y0}\" stroke=\"black\"/>",
        MARGIN,
        SVG_W - MARGIN
    );
    let mut tick = 0.0;
    while tick <= kmax + 1e-9 {
        let xt = x(tick);
        let _ = writeln!(
            out,
            "  <line x1=\"{xt}\" y1=\"{y0}\" x2=\"{xt}\" y2=\"{}\" stroke=\"black\"/>",
            y0 + 5.0
        );
        let _ = writeln!(
            out,
            "  <text x=\"{xt}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{tick:.0}</text>",
            y0 + 16.0
        );
        tick += 1.0;
    }
    for p in spectrum.peaks.iter().filter(|p| p.k >= 0.0) {
        let h = p.intensity / imax * (SVG_H - 2.0 * MARGIN);
        let _ = writeln!(
            out,
            "  <rect x=\"{:.3}\" y=\"{:.3}\" width=\"1.6\" height=\"{:.3}\" fill=\"#2255aa\"/>",
            x(p.k) - 0.8,
            y0 - h,
            h
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Disk chart of a 2D product spectrum: disk area proportional to intensity.
pub fn product_spectrum_svg(points: &[(f64, f64, f64)], kmax: f64) -> String {
    let mut out = svg_header();
    let imax = points
        .iter()
        .map(|&(_, _, i)| i)
        .fold(f64::MIN_POSITIVE, f64::max);
    let side = SVG_H - 2.0 * MARGIN;
    let cx = |k: f64| SVG_W / 2.0 + k / kmax * side / 2.0;
    let cy = |k: f64| SVG_H / 2.0 - k / kmax * side / 2.0;
    let rmax = 6.0;
    for &(k1, k2, i) in points {
        if i <= 0.0 {
            continue;
        }
        let r = (i / imax).sqrt() * rmax;
        let _ = writeln!(
            out,
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"#2255aa\"/>",
            cx(k1),
            cy(k2),
            r
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Two stacked strips showing the per-letter window approximants.
pub fn window_strips_svg(approx: &WindowApprox) -> String {
    let mut out = svg_header();
    let mut lo_all = f64::INFINITY;
    let mut hi_all = f64::NEG_INFINITY;
    for kind in TileKind::ALL {
        for (lo, hi) in approx.intervals_f64(kind) {
            lo_all = lo_all.min(lo);
            hi_all = hi_all.max(hi);
        }
    }
    if !lo_all.is_finite() {
        lo_all = 0.0;
        hi_all = 1.0;
    }
    let span = (hi_all - lo_all).max(1e-12);
    let x = |v: f64| MARGIN + (v - lo_all) / span * (SVG_W - 2.0 * MARGIN);
    let strip_h = 60.0;
    for (row, (kind, color)) in [(TileKind::A, "#2255aa"), (TileKind::B, "#ddaa00")]
        .into_iter()
        .enumerate()
    {
        let y = MARGIN + row as f64 * (strip_h + 40.0);
        let _ = writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\">{} (depth {})</text>",
            MARGIN,
            y - 6.0,
            kind.letter(),
            approx.depth()
        );
        for (lo, hi) in approx.intervals_f64(kind) {
            let w = (x(hi) - x(lo)).max(0.25);
            let _ = writeln!(
                out,
                "  <rect x=\"{:.3}\" y=\"{y}\" width=\"{w:.3}\" height=\"{strip_h}\" fill=\"{color}\"/>",
                x(lo)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
