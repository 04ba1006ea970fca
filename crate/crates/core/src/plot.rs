//! Standalone SVG plots. Output depends only on the input data, so equal
//! inputs give byte-identical files.

use std::fmt::Write;

use crate::metrics::AdversarialPoint;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

struct Frame {
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn new(x_max: f64, y_max: f64) -> Self {
        let fix = |v: f64| if v.is_finite() && v > 0.0 { v } else { 1.0 };
        Frame { x_max: fix(x_max), y_max: fix(y_max) }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + x / self.x_max * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM - y / self.y_max * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let (x0, y0) = (f.px(0.0), f.py(0.0));
    let (x1, y1) = (f.px(f.x_max), f.py(f.y_max));
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(out, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#);
    let _ = writeln!(out, "</g>");
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (t * f.x_max, t * f.y_max);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            f.px(xv),
            y0 + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 6.0,
            f.py(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn tick(v: f64) -> String {
    if v >= 100.0 || v == v.round() {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// One polyline per heuristic through its `(k, Σ t)` points.
pub fn survival_svg(series: &[(String, Vec<(usize, f64)>)]) -> String {
    let x_max = series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.0 as f64)).fold(0.0, f64::max);
    let y_max = series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.1)).fold(0.0, f64::max);
    let f = Frame::new(x_max, y_max);
    let mut out = String::new();
    header(&mut out, "Survival plot");
    axes(&mut out, &f, "problems solved", "cumulative seconds");
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = std::iter::once((0usize, 0.0))
            .chain(pts.iter().copied())
            .map(|(k, t)| format!("{:.2},{:.2}", f.px(k as f64), f.py(t)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            coords.join(" "),
            escape(name)
        );
        let ly = MARGIN_TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Scatter of two heuristics' times against the diagonal; points where either
/// run timed out are drawn as crosses.
pub fn adversarial_svg(name_a: &str, name_b: &str, points: &[AdversarialPoint]) -> String {
    let max = points.iter().flat_map(|p| [p.time_a, p.time_b]).fold(0.0, f64::max);
    let f = Frame::new(max, max);
    let mut out = String::new();
    header(&mut out, &format!("{name_a} vs {name_b}"));
    axes(&mut out, &f, &format!("{name_a} seconds"), &format!("{name_b} seconds"));
    let _ = writeln!(
        out,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#888888" stroke-dasharray="4 3"/>"##,
        f.px(0.0),
        f.py(0.0),
        f.px(f.x_max),
        f.py(f.y_max)
    );
    for p in points {
        let (x, y) = (f.px(p.time_a), f.py(p.time_b));
        let title = escape(&p.problem_id);
        if p.a_timed_out || p.b_timed_out {
            let _ = writeln!(
                out,
                r##"<path class="timeout" d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="#d62728" stroke-width="1.5"><title>{title} (timeout)</title></path>"##,
                x - 4.0,
                y - 4.0,
                x + 4.0,
                y + 4.0,
                x - 4.0,
                y + 4.0,
                x + 4.0,
                y - 4.0
            );
        } else {
            let _ = writeln!(
                out,
                r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#1f77b4"><title>{title}</title></circle>"##
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survival_is_deterministic() {
        let series = vec![("gmods".to_string(), vec![(1, 1.0), (2, 3.0), (3, 6.0)])];
        let a = survival_svg(&series);
        assert_eq!(a, survival_svg(&series));
        assert!(a.contains("<polyline"));
        assert!(a.contains("problems solved") && a.contains("cumulative seconds"));
    }

    #[test]
    fn adversarial_marks_timeouts() {
        let pts = vec![
            AdversarialPoint { problem_id: "p".into(), time_a: 60.0, time_b: 4.0, a_timed_out: true, b_timed_out: false },
            AdversarialPoint { problem_id: "q".into(), time_a: 2.0, time_b: 2.0, a_timed_out: false, b_timed_out: false },
        ];
        let svg = adversarial_svg("a", "b", &pts);
        assert_eq!(svg.matches("class=\"timeout\"").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(survival_svg(&[]).ends_with("</svg>\n"));
    }
}
