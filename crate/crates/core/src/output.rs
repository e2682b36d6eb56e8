//! Text emitters shared by the reports: CSV tables and single-curve SVG.
//!
//! Floats are written in shortest round-trip form.

use std::fmt::{self, Write as _};
use std::io::{self, Write};

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// Comma-separated table with a header row and LF line endings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            header: header.iter().map(|s| s.as_ref().to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_values(&mut self, row: &[f64]) {
        self.push_row(row.iter().map(|v| fmt_f64(*v)).collect());
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Display for CsvTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(f, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Self-contained SVG of one polyline with axes through the origin (when the
/// origin is in view), a frame, tick labels at the extremes and a title.
pub fn svg_curve(points: &[(f64, f64)], title: &str, x_label: &str, y_label: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const M: f64 = 60.0;

    let finite: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = finite.iter().fold(
        (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    // keep the imaginary axis in view so the sign of Re is readable
    x1 = x1.max(0.0);
    x0 = x0.min(0.0);
    let pad = |lo: f64, hi: f64| {
        let span = if hi > lo { hi - lo } else { 1.0 };
        (lo - 0.05 * span, hi + 0.05 * span)
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r##"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="#888" stroke-width="1"/>"##,
        W - 2.0 * M,
        H - 2.0 * M
    );
    if x0 < 0.0 && x1 > 0.0 {
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{M}" x2="{0:.2}" y2="{1}" stroke="black" stroke-width="1"/>"#,
            sx(0.0),
            H - M
        );
    }
    if y0 < 0.0 && y1 > 0.0 {
        let _ = writeln!(
            s,
            r#"<line x1="{M}" y1="{0:.2}" x2="{1}" y2="{0:.2}" stroke="black" stroke-width="1"/>"#,
            sy(0.0),
            W - M
        );
    }
    let mut path = String::new();
    for (x, y) in &finite {
        let _ = write!(path, "{:.3},{:.3} ", sx(*x), sy(*y));
    }
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#1f5fbf" stroke-width="1.5"/>"##,
        path.trim_end()
    );
    let text = |s: &mut String, x: f64, y: f64, anchor: &str, body: &str| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{}</text>"#,
            escape(body)
        );
    };
    text(&mut s, W / 2.0, M / 2.0, "middle", title);
    text(&mut s, W / 2.0, H - M / 4.0, "middle", x_label);
    text(&mut s, M / 4.0, H / 2.0, "start", y_label);
    text(&mut s, M, H - M + 16.0, "middle", &format!("{x0:.3e}"));
    text(&mut s, W - M, H - M + 16.0, "middle", &format!("{x1:.3e}"));
    text(&mut s, M - 4.0, H - M, "end", &format!("{y0:.3e}"));
    text(&mut s, M - 4.0, M + 4.0, "end", &format!("{y1:.3e}"));
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
