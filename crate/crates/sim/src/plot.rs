//! SVG bar charts of sweep results.
//!
//! Panel (a): mean E2E latency, cloud vs MEC, linear axis.
//! Panel (b): mean per-component latency, log axis.
//! Every bar is a `<rect class="bar">`; failed sweep points are left out.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use cv2x_mec::engine::{AggregateStats, Component};

use crate::error::SimError;
use crate::sweep::SweepResult;

const PANEL_W: f64 = 440.0;
const PANEL_H: f64 = 340.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;

const E2E_SERIES: [(Component, &str, &str); 2] = [
    (Component::E2eCloud, "Cloud", "#1f77b4"),
    (Component::E2eMec, "MEC", "#d62728"),
];

const COMPONENT_SERIES: [(Component, &str, &str); 5] = [
    (Component::Ul, "UL", "#1f77b4"),
    (Component::Bh, "BH", "#ff7f0e"),
    (Component::TnCn, "TN+CN", "#2ca02c"),
    (Component::Dl, "DL", "#d62728"),
    (Component::Exc, "Exc", "#9467bd"),
];

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Round upper bound and step for a linear axis starting at zero.
fn linear_ticks(max: f64) -> (f64, f64) {
    let max = if max > 0.0 { max } else { 1.0 };
    let raw = max / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    ((max / step).ceil() * step, step)
}

struct Panel<'a> {
    x0: f64,
    title: &'a str,
    x_label: &'a str,
    categories: Vec<String>,
    series: &'a [(Component, &'a str, &'a str)],
    values: Vec<Vec<f64>>, // [category][series], ms
    log: bool,
}

impl Panel<'_> {
    fn plot_w(&self) -> f64 {
        PANEL_W - MARGIN_L - MARGIN_R
    }

    fn plot_h(&self) -> f64 {
        PANEL_H - MARGIN_T - MARGIN_B
    }

    fn render(&self, out: &mut String) {
        let left = self.x0 + MARGIN_L;
        let top = MARGIN_T;
        let bottom = MARGIN_T + self.plot_h();
        let (w, h) = (self.plot_w(), self.plot_h());

        let positive = self.values.iter().flatten().copied().filter(|v| *v > 0.0);
        let (lo, hi) = positive.fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(v), b.max(v)));

        let _ = writeln!(
            out,
            r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
            num(self.x0 + MARGIN_L + w / 2.0),
            self.title
        );

        // y axis and ticks
        let y_of: Box<dyn Fn(f64) -> f64> = if self.log {
            let (d0, d1) = if lo.is_finite() {
                let d0 = lo.log10().floor();
                let d1 = hi.log10().ceil().max(d0 + 1.0);
                (d0, d1)
            } else {
                (0.0, 1.0)
            };
            for d in (d0 as i32)..=(d1 as i32) {
                let y = bottom - (d as f64 - d0) / (d1 - d0) * h;
                self.tick(out, left, w, y, &tick_label(10f64.powi(d)));
            }
            Box::new(move |v: f64| bottom - (v.log10() - d0) / (d1 - d0) * h)
        } else {
            let (top_v, step) = linear_ticks(hi);
            let n = (top_v / step).round() as i32;
            for i in 0..=n {
                let v = i as f64 * step;
                self.tick(out, left, w, bottom - v / top_v * h, &tick_label(v));
            }
            Box::new(move |v: f64| bottom - v / top_v * h)
        };

        let _ = writeln!(
            out,
            r#"<line x1="{l}" y1="{t}" x2="{l}" y2="{b}" stroke="black"/><line x1="{l}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#,
            l = num(left),
            t = num(top),
            b = num(bottom),
            r = num(left + w)
        );
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" text-anchor="middle" font-size="12" transform="rotate(-90 {x} {y})">{}</text>"#,
            if self.log {
                "Latency [ms] (log)"
            } else {
                "Latency [ms]"
            },
            x = num(self.x0 + 18.0),
            y = num(top + h / 2.0)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
            num(left + w / 2.0),
            num(PANEL_H - 12.0),
            self.x_label
        );

        // bars
        let groups = self.categories.len().max(1) as f64;
        let group_w = w / groups;
        let bar_w = group_w * 0.8 / self.series.len() as f64;
        for (g, (cat, vals)) in self.categories.iter().zip(&self.values).enumerate() {
            let gx = left + g as f64 * group_w + group_w * 0.1;
            for (s, (&v, (c, _, color))) in vals.iter().zip(self.series).enumerate() {
                if !(v > 0.0) {
                    continue;
                }
                let y = y_of(v).clamp(top, bottom);
                let _ = writeln!(
                    out,
                    r#"<rect class="bar" data-component="{}" x="{}" y="{}" width="{}" height="{}" fill="{}"><title>{}: {} ms</title></rect>"#,
                    c.name(),
                    num(gx + s as f64 * bar_w),
                    num(y),
                    num(bar_w),
                    num(bottom - y),
                    color,
                    c.name(),
                    num(v)
                );
            }
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="middle" font-size="11">{}</text>"#,
                num(left + (g as f64 + 0.5) * group_w),
                num(bottom + 16.0),
                cat
            );
        }

        // legend
        for (i, (_, label, color)) in self.series.iter().enumerate() {
            let lx = left + 8.0 + i as f64 * 62.0;
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="10" height="10" fill="{}"/><text x="{}" y="{}" font-size="11">{}</text>"#,
                num(lx),
                num(top - 14.0),
                color,
                num(lx + 14.0),
                num(top - 5.0),
                label
            );
        }
    }

    fn tick(&self, out: &mut String, left: f64, w: f64, y: f64, label: &str) {
        let _ = writeln!(
            out,
            r##"<line x1="{l}" y1="{y}" x2="{r}" y2="{y}" stroke="#ddd"/><text x="{tx}" y="{ty}" text-anchor="end" font-size="11">{label}</text>"##,
            l = num(left),
            r = num(left + w),
            y = num(y),
            tx = num(left - 6.0),
            ty = num(y + 4.0)
        );
    }
}

fn series_values(stats: &AggregateStats, series: &[(Component, &str, &str)]) -> Vec<f64> {
    series
        .iter()
        .map(|(c, _, _)| stats.get(*c).mean * 1e3)
        .collect()
}

/// Renders both panels of `result` as a standalone SVG document.
pub fn render_svg(result: &SweepResult) -> String {
    let ok: Vec<_> = result
        .rows
        .iter()
        .filter_map(|r| r.stats().map(|s| (r.value.to_string(), s)))
        .collect();
    let categories: Vec<String> = ok.iter().map(|(v, _)| v.clone()).collect();
    let label = result.parameter.label();

    let panels = [
        Panel {
            x0: 0.0,
            title: "(a) E2E latency",
            x_label: label,
            categories: categories.clone(),
            series: &E2E_SERIES,
            values: ok
                .iter()
                .map(|(_, s)| series_values(s, &E2E_SERIES))
                .collect(),
            log: false,
        },
        Panel {
            x0: PANEL_W,
            title: "(b) Latency components",
            x_label: label,
            categories,
            series: &COMPONENT_SERIES,
            values: ok
                .iter()
                .map(|(_, s)| series_values(s, &COMPONENT_SERIES))
                .collect(),
            log: true,
        },
    ];

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"#,
        w = num(2.0 * PANEL_W),
        h = num(PANEL_H)
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for p in &panels {
        p.render(&mut out);
    }
    out.push_str("</svg>\n");
    out
}

/// Writes the SVG for `result` to `path`.
pub fn emit_plot(result: &SweepResult, path: &Path) -> Result<(), SimError> {
    fs::write(path, render_svg(result)).map_err(|e| SimError::io(path, e))
}
