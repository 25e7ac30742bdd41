//! Minimal SVG plots: log-log deficits with error bars and fit residuals.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 420.0;
const M: f64 = 60.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    /// `(t, deficit, stderr)`.
    pub points: Vec<(f64, f64, f64)>,
    /// `(exponent, amplitude)` of a fitted line.
    pub fit: Option<(f64, f64)>,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        M + (x - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * M)
    }

    fn py(&self, y: f64) -> f64 {
        H - M - (y - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * M)
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(1e-12);
    (lo - pad, hi + pad)
}

fn open(out: &mut String, title: &str, f: &Frame, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(out, "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>", W / 2.0, escape(title));
    let _ = writeln!(
        out,
        "<rect x=\"{M}\" y=\"{M}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        W - 2.0 * M,
        H - 2.0 * M
    );
    for k in 0..=4 {
        let xv = f.x.0 + (f.x.1 - f.x.0) * k as f64 / 4.0;
        let yv = f.y.0 + (f.y.1 - f.y.0) * k as f64 / 4.0;
        let _ = writeln!(out, "<text x=\"{:.1}\" y=\"{}\" text-anchor=\"middle\">{xv:.2}</text>", f.px(xv), H - M + 16.0);
        let _ = writeln!(out, "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">{yv:.2}</text>", M - 6.0, f.py(yv) + 4.0);
    }
    let _ = writeln!(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>", W / 2.0, H - 16.0, escape(xlabel));
    let _ = writeln!(
        out,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>",
        H / 2.0,
        H / 2.0,
        escape(ylabel)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// `ln deficit` against `ln t` with ±1 stderr bars and fitted lines.
pub fn deficit_plot(title: &str, series: &[Series]) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0 > 0.0 && p.1 > 0.0);
    let frame = Frame {
        x: bounds(all().map(|p| p.0.ln())),
        y: bounds(all().flat_map(|p| [p.1.ln(), (p.1 + p.2).ln(), (p.1 - p.2).max(p.1 * 0.5).ln()])),
    };
    let mut out = String::new();
    open(&mut out, title, &frame, "ln t", "ln deficit");
    for (i, s) in series.iter().enumerate() {
        let c = COLOURS[i % COLOURS.len()];
        for &(t, d, se) in s.points.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0) {
            let (x, y) = (frame.px(t.ln()), frame.py(d.ln()));
            if se > 0.0 {
                let top = frame.py((d + se).ln());
                let bottom = frame.py((d - se).max(d * 0.5).ln());
                let _ = writeln!(out, "<line x1=\"{x:.1}\" y1=\"{top:.1}\" x2=\"{x:.1}\" y2=\"{bottom:.1}\" stroke=\"{c}\"/>");
            }
            let _ = writeln!(out, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"2.5\" fill=\"{c}\"/>");
        }
        if let Some((theta, amp)) = s.fit {
            let (x0, x1) = frame.x;
            let y = |x: f64| amp.ln() + theta * x;
            let _ = writeln!(
                out,
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{c}\" stroke-dasharray=\"4 3\"/>",
                frame.px(x0),
                frame.py(y(x0)),
                frame.px(x1),
                frame.py(y(x1))
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" fill=\"{c}\">{}</text>",
            M + 8.0,
            M + 16.0 + 14.0 * i as f64,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Fit residuals `(ln t, r)` joined by a line, with the zero level marked.
pub fn residual_plot(title: &str, residuals: &[(f64, f64)]) -> String {
    let frame = Frame {
        x: bounds(residuals.iter().map(|r| r.0)),
        y: bounds(residuals.iter().map(|r| r.1).chain([0.0])),
    };
    let mut out = String::new();
    open(&mut out, title, &frame, "ln t", "residual of ln deficit");
    let _ = writeln!(
        out,
        "<line x1=\"{M}\" y1=\"{0:.1}\" x2=\"{1}\" y2=\"{0:.1}\" stroke=\"grey\"/>",
        frame.py(0.0),
        W - M
    );
    let path: Vec<String> = residuals
        .iter()
        .map(|&(x, r)| format!("{:.1},{:.1}", frame.px(x), frame.py(r)))
        .collect();
    let _ = writeln!(out, "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\"/>", path.join(" "), COLOURS[0]);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plots_are_well_formed() {
        let s = Series {
            label: "shc α=1.5 <fit>".into(),
            points: vec![(1e-3, 0.01, 1e-4), (1e-2, 0.02, 1e-4), (1e-1, 0.05, 0.0)],
            fit: Some((0.35, 0.12)),
        };
        let svg = deficit_plot("cantor", &[s]);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("&lt;fit&gt;"));
        assert_eq!(svg.matches("<circle").count(), 3);
        let r = residual_plot("residuals", &[(-6.0, 0.01), (-3.0, -0.02)]);
        assert!(r.contains("<polyline"));
        assert!(!deficit_plot("empty", &[]).contains("NaN"));
    }
}
