//! Static SVG scatter plots of returned non-dominated sets.

use std::fmt::Write as _;
use std::path::Path;

use crate::engine::AlgorithmVariant;
use crate::error::{Error, Result};
use crate::harness::results::FrontRow;

const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 260.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 28.0;
const MARGIN_B: f64 = 44.0;
const LEGEND_H: f64 = 32.0;
const MAX_COLUMNS: usize = 4;

struct Panel<'a> {
    title: String,
    rows: Vec<&'a FrontRow>,
}

fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.05 };
        (lo - pad, hi + pad)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

fn marker(out: &mut String, variant: AlgorithmVariant, x: f64, y: f64, class: &str) {
    match variant {
        AlgorithmVariant::ArchiveStore => {
            let _ = writeln!(
                out,
                r##"<circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="3" fill="#1f4fd1"/>"##
            );
        }
        AlgorithmVariant::ArchiveReuse => {
            let _ = writeln!(
                out,
                r##"<path class="{class}" d="M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}" stroke="#000000" stroke-width="1.5"/>"##,
                x - 3.5,
                y - 3.5,
                x + 3.5,
                y + 3.5,
                x - 3.5,
                y + 3.5,
                x + 3.5,
                y - 3.5
            );
        }
        AlgorithmVariant::LargePop => {
            let _ = writeln!(
                out,
                r##"<rect class="{class}" x="{:.2}" y="{:.2}" width="6" height="6" fill="#7a7a7a"/>"##,
                x - 3.0,
                y - 3.0
            );
        }
    }
}

fn variant_name(v: AlgorithmVariant) -> &'static str {
    match v {
        AlgorithmVariant::LargePop => "SMS-EMOA-L",
        AlgorithmVariant::ArchiveStore => "SMS-EMOA-A",
        AlgorithmVariant::ArchiveReuse => "SMS-EMOA-AR",
    }
}

fn draw_panel(out: &mut String, panel: &Panel<'_>, ox: f64, oy: f64) {
    let (x0, x1) = range(panel.rows.iter().map(|r| r.f1));
    let (y0, y1) = range(panel.rows.iter().map(|r| r.f2));
    let left = ox + MARGIN_L;
    let right = ox + PANEL_W - MARGIN_R;
    let top = oy + MARGIN_T;
    let bottom = oy + PANEL_H - MARGIN_B;
    let sx = |v: f64| left + (v - x0) / (x1 - x0) * (right - left);
    let sy = |v: f64| bottom - (v - y0) / (y1 - y0) * (bottom - top);

    let _ = writeln!(out, r#"<g class="panel">"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
        (left + right) / 2.0,
        oy + 18.0,
        panel.title
    );
    let _ = writeln!(
        out,
        r##"<path class="axes" d="M{left:.2} {top:.2}L{left:.2} {bottom:.2}L{right:.2} {bottom:.2}" fill="none" stroke="#333333"/>"##
    );
    for (v, anchor, x) in [(x0, "start", left), (x1, "end", right)] {
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="{anchor}" font-size="10">{}</text>"#,
            bottom + 14.0,
            fmt_num(v)
        );
    }
    for (v, y) in [(y0, bottom), (y1, top + 8.0)] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{y:.2}" text-anchor="end" font-size="10">{}</text>"#,
            left - 4.0,
            fmt_num(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">f1</text>"#,
        (left + right) / 2.0,
        bottom + 32.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12" transform="rotate(-90 {:.2} {:.2})">f2</text>"#,
        ox + 16.0,
        (top + bottom) / 2.0,
        ox + 16.0,
        (top + bottom) / 2.0
    );
    for r in &panel.rows {
        marker(out, r.variant, sx(r.f1), sy(r.f2), "marker");
    }
    let _ = writeln!(out, "</g>");
}

/// SVG text for the given front points: one panel per (problem, n) in order
/// of first appearance, one marker per row, one legend entry per variant.
pub fn render_front_plot(rows: &[FrontRow]) -> String {
    let mut panels: Vec<Panel<'_>> = Vec::new();
    for r in rows {
        let title = format!("{}-{}", r.problem, r.n);
        match panels.iter_mut().find(|p| p.title == title) {
            Some(p) => p.rows.push(r),
            None => panels.push(Panel {
                title,
                rows: vec![r],
            }),
        }
    }
    if panels.is_empty() {
        panels.push(Panel {
            title: String::new(),
            rows: Vec::new(),
        });
    }
    let variants: Vec<AlgorithmVariant> = AlgorithmVariant::ALL
        .into_iter()
        .filter(|v| rows.iter().any(|r| r.variant == *v))
        .collect();

    let columns = panels.len().min(MAX_COLUMNS);
    let grid_rows = panels.len().div_ceil(columns);
    let width = columns as f64 * PANEL_W;
    let height = LEGEND_H + grid_rows as f64 * PANEL_H;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect width="100%" height="100%" fill="#ffffff"/>"##
    );
    let _ = writeln!(out, r#"<g class="legend" font-size="12">"#);
    for (i, v) in variants.iter().enumerate() {
        let x = 20.0 + i as f64 * 140.0;
        let _ = writeln!(out, r#"<g class="legend-entry">"#);
        marker(&mut out, *v, x, 16.0, "legend-marker");
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="20.00">{}</text>"#,
            x + 10.0,
            variant_name(*v)
        );
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</g>");
    for (i, panel) in panels.iter().enumerate() {
        let ox = (i % columns) as f64 * PANEL_W;
        let oy = LEGEND_H + (i / columns) as f64 * PANEL_H;
        draw_panel(&mut out, panel, ox, oy);
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_front_plot(rows: &[FrontRow], path: &Path) -> Result<()> {
    std::fs::write(path, render_front_plot(rows)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(variant: AlgorithmVariant, problem: &str, f1: f64, f2: f64) -> FrontRow {
        FrontRow {
            experiment: "fronts".into(),
            problem: problem.into(),
            n: 100,
            variant,
            run: 0,
            f1,
            f2,
        }
    }

    #[test]
    fn counts_markers_and_legend_entries() {
        let mut rows = Vec::new();
        for i in 0..3 {
            let x = f64::from(i);
            rows.push(point(AlgorithmVariant::ArchiveStore, "KP", x, 3.0 - x));
            rows.push(point(
                AlgorithmVariant::ArchiveReuse,
                "KP",
                x + 0.5,
                3.5 - x,
            ));
        }
        let svg = render_front_plot(&rows);
        assert_eq!(svg.matches(r#"class="marker""#).count(), 6);
        assert_eq!(svg.matches(r#"class="legend-entry""#).count(), 2);
        assert_eq!(svg.matches(r#"class="panel""#).count(), 1);
        assert!(svg.contains("SMS-EMOA-A<") && svg.contains("SMS-EMOA-AR<"));
    }

    #[test]
    fn empty_input_draws_axes_only() {
        let svg = render_front_plot(&[]);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches(r#"class="axes""#).count(), 1);
        assert_eq!(svg.matches(r#"class="marker""#).count(), 0);
        assert_eq!(svg.matches(r#"class="legend-entry""#).count(), 0);
    }

    #[test]
    fn output_is_deterministic_and_panelled() {
        let rows = vec![
            point(AlgorithmVariant::ArchiveStore, "KP", 1.0, 2.0),
            point(AlgorithmVariant::ArchiveStore, "TSP", -5.0, 7.0),
            point(AlgorithmVariant::ArchiveReuse, "TSP", 2.5e6, 1.0),
        ];
        let a = render_front_plot(&rows);
        assert_eq!(a, render_front_plot(&rows));
        assert_eq!(a.matches(r#"class="panel""#).count(), 2);
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("a.svg");
        let p2 = dir.path().join("b.svg");
        emit_front_plot(&rows, &p1).unwrap();
        emit_front_plot(&rows, &p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
        assert!(matches!(
            emit_front_plot(&rows, &dir.path().join("missing").join("x.svg")),
            Err(Error::Io { .. })
        ));
    }
}
