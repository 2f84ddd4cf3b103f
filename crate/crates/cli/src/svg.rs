//! Self-contained SVG line plots.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series {
            label: label.into(),
            points,
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Axes, min/max tick labels, one polyline per series and a legend.
/// Non-finite points are dropped.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let finite = |&&(x, y): &&(f64, f64)| x.is_finite() && y.is_finite();
    let mut x_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y_range = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in s.points.iter().filter(finite) {
            x_range = (x_range.0.min(x), x_range.1.max(x));
            y_range = (y_range.0.min(y), y_range.1.max(y));
        }
    }
    if x_range.0 > x_range.1 {
        x_range = (0.0, 1.0);
        y_range = (0.0, 1.0);
    }
    if x_range.1 == x_range.0 {
        x_range.1 = x_range.0 + 1.0;
    }
    if y_range.1 == y_range.0 {
        y_range = (y_range.0 - 0.5, y_range.1 + 0.5);
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x_range.0) / (x_range.1 - x_range.0) * plot_w;
    let py = |y: f64| TOP + plot_h - (y - y_range.0) / (y_range.1 - y_range.0) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );
    let (x0, y0, x1, y1) = (LEFT, TOP + plot_h, LEFT + plot_w, TOP);
    let _ = writeln!(
        out,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{x0}" y="{}" text-anchor="middle">{}</text>"#,
        y0 + 16.0,
        tick(x_range.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{x1}" y="{}" text-anchor="middle">{}</text>"#,
        y0 + 16.0,
        tick(x_range.1)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{y0}" text-anchor="end">{}</text>"#,
        x0 - 6.0,
        tick(y_range.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        x0 - 6.0,
        y1 + 4.0,
        tick(y_range.1)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_label)
    );

    for (i, s) in series.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let mut points = String::new();
        for &(x, y) in s.points.iter().filter(finite) {
            let _ = write!(points, "{:.2},{:.2} ", px(x), py(y));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let lx = LEFT + plot_w + 12.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-3) {
        format!("{v:.3e}")
    } else {
        format!("{v:.4}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_is_a_closed_svg_with_one_polyline_per_series() {
        let a = Series::new("k", vec![(0.0, 1.0), (1.0, 2.0), (2.0, f64::NAN)]);
        let b = Series::new("c <lower>", vec![(0.0, 0.5), (2.0, 0.25)]);
        let svg = line_plot("t & k", "t", "value", &[a, b]);
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("t &amp; k") && svg.contains("c &lt;lower&gt;"));
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn degenerate_input_still_renders() {
        let svg = line_plot("empty", "x", "y", &[Series::new("none", vec![])]);
        assert!(svg.contains("<polyline"));
        let flat = line_plot("flat", "x", "y", &[Series::new("one", vec![(1.0, 1.0)])]);
        assert!(!flat.contains("inf") && !flat.contains("NaN"));
    }
}
