//! Minimal SVG charts: polyline fidelity plots and stacked class bars.

use std::fmt::Write;

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 15] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173",
];

/// One named curve.
pub struct Line<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        let span = if self.x1 > self.x0 {
            self.x1 - self.x0
        } else {
            1.0
        };
        LEFT + (x - self.x0) / span * (W - LEFT - RIGHT)
    }
    fn py(&self, y: f64) -> f64 {
        let span = if self.y1 > self.y0 {
            self.y1 - self.y0
        } else {
            1.0
        };
        H - BOTTOM - (y - self.y0) / span * (H - TOP - BOTTOM)
    }
}

fn header(out: &mut String, title: &str) {
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#)
        .unwrap();
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
        (W - RIGHT + LEFT) / 2.0,
        escape(title)
    )
    .unwrap();
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str, x_ticks: &[f64]) {
    let (l, r, t, b) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    writeln!(
        out,
        r#"<path d="M{l} {t} L{l} {b} L{r} {b}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    for i in 0..=5 {
        let y = f.y0 + (f.y1 - f.y0) * i as f64 / 5.0;
        let py = f.py(y);
        writeln!(
            out,
            r##"<line x1="{l}" y1="{py:.1}" x2="{r}" y2="{py:.1}" stroke="#ddd"/>"##
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{y:.2}</text>"#,
            l - 6.0,
            py + 4.0
        )
        .unwrap();
    }
    for &x in x_ticks {
        let px = f.px(x);
        writeln!(
            out,
            r#"<line x1="{px:.1}" y1="{b}" x2="{px:.1}" y2="{}" stroke="black"/>"#,
            b + 4.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{px:.1}" y="{}" text-anchor="middle">{}</text>"#,
            b + 18.0,
            percent(x)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (l + r) / 2.0,
        H - 15.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        (t + b) / 2.0,
        (t + b) / 2.0,
        escape(y_label)
    )
    .unwrap();
}

fn legend(out: &mut String, labels: &[&str]) {
    for (i, label) in labels.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * i as f64;
        let x = W - RIGHT + 15.0;
        writeln!(
            out,
            r#"<rect x="{x}" y="{}" width="12" height="12" fill="{}"/>"#,
            y - 10.0,
            PALETTE[i % PALETTE.len()]
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{y}">{}</text>"#,
            x + 18.0,
            escape(label)
        )
        .unwrap();
    }
}

fn percent(x: f64) -> String {
    let s = format!("{:.2}", x * 100.0);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    format!("{s}%")
}

fn ticks(x0: f64, x1: f64) -> Vec<f64> {
    if x1 <= x0 {
        return vec![x0];
    }
    (0..=4).map(|i| x0 + (x1 - x0) * i as f64 / 4.0).collect()
}

/// Fidelity-style line chart with the y axis fixed to `[0, 1]`.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, lines: &[Line<'_>]) -> String {
    let xs = lines.iter().flat_map(|l| l.points.iter().map(|p| p.0));
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
        (a.min(x), b.max(x))
    });
    let (x0, x1) = if x0.is_finite() { (x0, x1) } else { (0.0, 1.0) };
    let f = Frame {
        x0,
        x1,
        y0: 0.0,
        y1: 1.0,
    };
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f, x_label, y_label, &ticks(x0, x1));
    for (i, line) in lines.iter().enumerate() {
        let pts: Vec<String> = line
            .points
            .iter()
            .map(|&(x, y)| format!("{:.1},{:.1}", f.px(x), f.py(y)))
            .collect();
        writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.8"/>"#,
            pts.join(" "),
            PALETTE[i % PALETTE.len()]
        )
        .unwrap();
    }
    legend(&mut out, &lines.iter().map(|l| l.label).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    out
}

/// Stacked bars: `bars[i] = (coordinate, per-class values)`, values in
/// the order of `classes`. The y axis spans the tallest stack.
pub fn stacked_bars(
    title: &str,
    x_label: &str,
    y_label: &str,
    classes: &[&str],
    bars: &[(f64, Vec<f64>)],
) -> String {
    let top = bars
        .iter()
        .map(|(_, v)| v.iter().sum::<f64>())
        .fold(0.0, f64::max);
    let y1 = if top > 0.0 { top * 1.05 } else { 1.0 };
    let (x0, x1) = match (bars.first(), bars.last()) {
        (Some(a), Some(b)) => (a.0, b.0),
        _ => (0.0, 1.0),
    };
    let f = Frame {
        x0,
        x1,
        y0: 0.0,
        y1,
    };
    let plot_w = W - LEFT - RIGHT;
    let bar_w = (plot_w / bars.len().max(1) as f64 * 0.8).min(60.0);
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f, x_label, y_label, &ticks(x0, x1));
    for (x, values) in bars {
        // A single bar has no x extent; centre it.
        let cx = if bars.len() == 1 {
            LEFT + plot_w / 2.0
        } else {
            f.px(*x)
        };
        let mut acc = 0.0;
        for (i, v) in values.iter().enumerate() {
            let (ya, yb) = (f.py(acc), f.py(acc + v));
            acc += v;
            writeln!(
                out,
                r#"<rect x="{:.1}" y="{:.1}" width="{bar_w:.1}" height="{:.1}" fill="{}"/>"#,
                cx - bar_w / 2.0,
                yb,
                (ya - yb).max(0.0),
                PALETTE[i % PALETTE.len()]
            )
            .unwrap();
        }
    }
    legend(&mut out, classes);
    out.push_str("</svg>\n");
    out
}
