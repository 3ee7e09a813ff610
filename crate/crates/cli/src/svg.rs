//! Rectangle diagrams, drawn vertically.
//!
//! The left edge of a rectangle is the domain and the right edge the range,
//! with 0 at the top. Each interior breakpoint `(x, f(x))` becomes a chord
//! from height `x` on the left to height `f(x)` on the right.

use std::fmt::Write;

use thompson_core::PLMap;

const HEIGHT: f64 = 400.0;
const WIDTH: f64 = 120.0;
const GAP: f64 = 40.0;
const MARGIN: f64 = 30.0;

fn rectangle(out: &mut String, f: &PLMap, left: f64, label: &str) {
    let top = MARGIN;
    let _ = writeln!(
        out,
        r#"  <rect x="{left}" y="{top}" width="{WIDTH}" height="{HEIGHT}" fill="none" stroke="black"/>"#
    );
    let bps = f.breakpoints();
    for (x, y) in &bps[1..bps.len() - 1] {
        let y1 = top + x.to_f64() * HEIGHT;
        let y2 = top + y.to_f64() * HEIGHT;
        let _ = writeln!(
            out,
            r#"  <line class="chord" data-from="{x}" data-to="{y}" x1="{left}" y1="{y1}" x2="{}" y2="{y2}" stroke="black"/>"#,
            left + WIDTH
        );
    }
    if !label.is_empty() {
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" text-anchor="middle" font-family="serif" font-size="16">{}</text>"#,
            left + WIDTH / 2.0,
            top + HEIGHT + 22.0,
            escape(label)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Draws the maps side by side, the first one leftmost. Adjacent rectangles
/// share no edge; the range of one is read as the domain of the next.
pub fn render(maps: &[(PLMap, String)]) -> String {
    let n = maps.len().max(1) as f64;
    let width = 2.0 * MARGIN + n * WIDTH + (n - 1.0) * GAP;
    let height = 2.0 * MARGIN + HEIGHT + 20.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for (i, (f, label)) in maps.iter().enumerate() {
        rectangle(&mut out, f, MARGIN + i as f64 * (WIDTH + GAP), label);
    }
    out.push_str("</svg>\n");
    out
}
