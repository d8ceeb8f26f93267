//! Minimal SVG plots.

use std::fmt::Write as _;
use std::path::Path;

use orbit_integra::arith::Place;
use orbit_integra::galois::GaloisOrbitPartition;
use orbit_integra::{Error, Result};

const SIZE: f64 = 480.0;
const PAD: f64 = 40.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

pub fn write(path: &Path, doc: &str) -> Result<()> {
    std::fs::write(path, doc).map_err(|e| Error::Input(format!("cannot write '{}': {e}", path.display())))
}

fn open(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Level points coloured by Galois class, with the unit circle.
pub fn scatter(pts: &[(f64, f64)], part: &GaloisOrbitPartition) -> String {
    let r = pts.iter().map(|(x, y)| x.hypot(*y)).fold(1.0f64, f64::max) * 1.1;
    let half = (SIZE - 2.0 * PAD) / 2.0;
    let c = SIZE / 2.0;
    let map = |x: f64, y: f64| (c + x / r * half, c - y / r * half);
    let mut s = open(SIZE, SIZE);
    let _ = writeln!(s, "<line x1=\"{PAD}\" y1=\"{c}\" x2=\"{}\" y2=\"{c}\" stroke=\"#ccc\"/>", SIZE - PAD);
    let _ = writeln!(s, "<line x1=\"{c}\" y1=\"{PAD}\" x2=\"{c}\" y2=\"{}\" stroke=\"#ccc\"/>", SIZE - PAD);
    let _ = writeln!(s, "<circle cx=\"{c}\" cy=\"{c}\" r=\"{:.3}\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>", half / r);
    let dot = if pts.len() > 512 { 1.2 } else { 3.0 };
    for (k, cl) in part.classes.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        for &j in &cl.indices {
            let (x, y) = pts[j as usize];
            let (px, py) = map(x, y);
            let _ = writeln!(s, "<circle cx=\"{px:.3}\" cy=\"{py:.3}\" r=\"{dot}\" fill=\"{colour}\"/>");
        }
    }
    let _ = writeln!(
        s,
        "<text x=\"{PAD}\" y=\"24\" font-family=\"sans-serif\" font-size=\"13\">x^{} = {}: {} classes</text>",
        part.level.n,
        part.level.beta,
        part.classes.len()
    );
    s + "</svg>\n"
}

/// log10 of the scaled discrepancy against depth, one polyline per place.
pub fn decay(rows: &[(u32, u64, Place, f64, f64)]) -> String {
    let w = 560.0;
    let h = 360.0;
    let pts: Vec<&(u32, u64, Place, f64, f64)> = rows.iter().filter(|r| r.4.is_finite() && r.4 > 0.0).collect();
    let mut s = open(w, h);
    if pts.is_empty() {
        return s + "</svg>\n";
    }
    let (m0, m1) = pts.iter().fold((u32::MAX, 0), |(a, b), r| (a.min(r.0), b.max(r.0)));
    let ys: Vec<f64> = pts.iter().map(|r| r.4.log10()).collect();
    let (y0, y1) = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(y), b.max(y)));
    let (y0, y1) = if y1 - y0 < 1e-9 { (y0 - 0.5, y1 + 0.5) } else { (y0, y1) };
    let span = (m1 - m0).max(1) as f64;
    let map = |m: u32, y: f64| (PAD + (m - m0) as f64 / span * (w - 2.0 * PAD), h - PAD - (y - y0) / (y1 - y0) * (h - 2.0 * PAD));
    let _ = writeln!(s, "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>", w - 2.0 * PAD, h - 2.0 * PAD);
    let mut places: Vec<&Place> = pts.iter().map(|r| &r.2).collect();
    places.sort();
    places.dedup();
    for (k, v) in places.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let line: Vec<String> = pts
            .iter()
            .filter(|r| &&r.2 == v)
            .map(|r| {
                let (x, y) = map(r.0, r.4.log10());
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(s, "<polyline points=\"{}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\"/>", line.join(" "));
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{colour}\">v = {v}</text>",
            w - PAD - 60.0,
            PAD + 16.0 * (k as f64 + 1.0)
        );
    }
    let _ = writeln!(s, "<text x=\"{PAD}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">depth {m0}..{m1}</text>", h - 12.0);
    let _ = writeln!(
        s,
        "<text x=\"{PAD}\" y=\"24\" font-family=\"sans-serif\" font-size=\"12\">log10 D(n)·√(n/log n): {y1:.2} to {y0:.2}</text>"
    );
    s + "</svg>\n"
}
