//! Minimal SVG 1.1 writer for line plots and scatter maps.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;

pub struct Series<'a> {
    pub points: &'a [(f64, f64)],
    pub color: &'a str,
    /// polyline when false, markers when true
    pub markers: bool,
}

pub struct Plot<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub series: Vec<Series<'a>>,
    /// vertical reference line at this x, if any
    pub vline: Option<f64>,
}

fn bounds(series: &[Series], vline: Option<f64>) -> (f64, f64, f64, f64) {
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
            b = (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y));
        }
    }
    if let Some(v) = vline {
        b = (b.0.min(v), b.1.max(v), b.2, b.3);
    }
    if !b.0.is_finite() {
        return (0.0, 1.0, 0.0, 1.0);
    }
    let widen = |lo: f64, hi: f64| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
    let (x0, x1) = widen(b.0, b.1);
    let (y0, y1) = widen(b.2, b.3);
    (x0, x1, y0, y1)
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(p: &Plot) -> String {
    let (x0, x1, y0, y1) = bounds(&p.series, p.vline);
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ =
        writeln!(out, r#"<text x="{}" y="25" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, esc(p.title));
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
        W / 2.0,
        H - 12.0,
        esc(p.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 15 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        esc(p.y_label)
    );
    for (v, anchor, x, y) in [(x0, "start", PAD, H - PAD + 15.0), (x1, "end", W - PAD, H - PAD + 15.0)] {
        let _ = writeln!(out, r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-size="10">{}</text>"#, fmt_tick(v));
    }
    for (v, y) in [(y0, H - PAD), (y1, PAD + 10.0)] {
        let _ =
            writeln!(out, r#"<text x="{}" y="{y}" text-anchor="end" font-size="10">{}</text>"#, PAD - 4.0, fmt_tick(v));
    }
    if let Some(v) = p.vline {
        let x = sx(v);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{PAD}" x2="{x:.2}" y2="{}" stroke="gray" stroke-dasharray="4,3"/>"#,
            H - PAD
        );
    }
    for s in &p.series {
        let pts: Vec<(f64, f64)> =
            s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).map(|&(x, y)| (sx(x), sy(y))).collect();
        if s.markers {
            for (x, y) in pts {
                let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{}"/>"#, s.color);
            }
        } else if !pts.is_empty() {
            let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1"/>"#,
                coords.join(" "),
                s.color
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_formed_header_and_escaping() {
        let pts = [(0.0, 1.0), (1.0, 2.0)];
        let s = render(&Plot {
            title: "a < b",
            x_label: "t",
            y_label: "phase",
            series: vec![Series { points: &pts, color: "black", markers: false }],
            vline: Some(0.5),
        });
        assert!(s.starts_with("<?xml"));
        assert!(s.contains(r#"version="1.1""#));
        assert!(s.contains("a &lt; b"));
        assert!(s.trim_end().ends_with("</svg>"));
    }
}
