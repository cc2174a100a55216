//! Minimal standalone SVG charts.
//!
//! The scatter chart draws `(avg_set, avg_pairwise)` points together with
//! the equality diagonal, which is the only `<line>` element in the file;
//! axes are paths. The bar chart draws one `<rect class="bar">` per entry.

use std::fmt::Write;

use crate::error::{Error, Result};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 56.0;

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{title}</title>");
    let _ = writeln!(
        out,
        r#"<path d="M{MARGIN} {top} L{MARGIN} {bottom} L{right} {bottom}" fill="none" stroke="black" stroke-width="1"/>"#,
        top = MARGIN,
        bottom = SIZE - MARGIN,
        right = SIZE - MARGIN,
    );
}

fn label(out: &mut String, x: f64, y: f64, anchor: &str, text: &str) {
    let _ = writeln!(
        out,
        r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{text}</text>"#
    );
}

/// Scatter of `(x, y)` points with the diagonal `y = x`.
pub fn scatter_svg(points: &[(f64, f64)], x_label: &str, y_label: &str) -> Result<String> {
    if points.is_empty() {
        return Err(Error::InvalidInput("no points to plot".into()));
    }
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    for &(x, y) in points {
        lo = lo.min(x).min(y);
        hi = hi.max(x).max(y);
    }
    let span = SIZE - 2.0 * MARGIN;
    let sx = |v: f64| MARGIN + (v - lo) / (hi - lo) * span;
    let sy = |v: f64| SIZE - MARGIN - (v - lo) / (hi - lo) * span;

    let mut out = String::new();
    header(&mut out, &format!("{y_label} against {x_label}"));
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1.5"/>"#,
        sx(lo),
        sy(lo),
        sx(hi),
        sy(hi)
    );
    for &(x, y) in points {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="darkorange"/>"#,
            sx(x),
            sy(y)
        );
    }
    label(&mut out, SIZE / 2.0, SIZE - 16.0, "middle", x_label);
    label(&mut out, 14.0, MARGIN - 12.0, "start", y_label);
    label(&mut out, MARGIN, SIZE - MARGIN + 16.0, "middle", &format!("{lo:.2}"));
    label(&mut out, SIZE - MARGIN, SIZE - MARGIN + 16.0, "middle", &format!("{hi:.2}"));
    label(&mut out, MARGIN - 6.0, SIZE - MARGIN, "end", &format!("{lo:.2}"));
    label(&mut out, MARGIN - 6.0, MARGIN + 4.0, "end", &format!("{hi:.2}"));
    out.push_str("</svg>\n");
    Ok(out)
}

/// Bar chart of `(category, value)` pairs, values assumed non-negative.
pub fn bars_svg(bars: &[(String, f64)], y_label: &str) -> Result<String> {
    if bars.is_empty() {
        return Err(Error::InvalidInput("no bars to plot".into()));
    }
    let top = bars.iter().map(|b| b.1).fold(0.0f64, f64::max).max(1e-12) * 1.1;
    let span = SIZE - 2.0 * MARGIN;
    let slot = span / bars.len() as f64;
    let mut out = String::new();
    header(&mut out, y_label);
    for (i, (name, value)) in bars.iter().enumerate() {
        let h = value.max(0.0) / top * span;
        let x = MARGIN + slot * (i as f64 + 0.15);
        let _ = writeln!(
            out,
            r#"<rect class="bar" x="{x:.2}" y="{:.2}" width="{:.2}" height="{h:.2}" fill="steelblue"/>"#,
            SIZE - MARGIN - h,
            slot * 0.7
        );
        label(&mut out, x + slot * 0.35, SIZE - MARGIN + 16.0, "middle", name);
        label(&mut out, x + slot * 0.35, SIZE - MARGIN - h - 4.0, "middle", &format!("{value:.4}"));
    }
    label(&mut out, 14.0, MARGIN - 12.0, "start", y_label);
    out.push_str("</svg>\n");
    Ok(out)
}
