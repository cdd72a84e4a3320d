//! Minimal deterministic SVG output: root scatter plots and histogram with
//! curve overlays. Numbers are printed with fixed precision so identical
//! data always gives identical bytes.

use std::fmt::Write;

use crate::error::Error;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Series {
    /// Points in the plane, one marker each.
    Scatter(Vec<(f64, f64)>),
    /// Polyline through the points in order.
    Curve(Vec<(f64, f64)>),
    /// Bars `(left, right, height)`.
    Histogram(Vec<(f64, f64, f64)>),
}

impl Series {
    fn len(&self) -> usize {
        match self {
            Series::Scatter(p) | Series::Curve(p) => p.len(),
            Series::Histogram(b) => b.len(),
        }
    }

    fn extent(&self) -> (f64, f64, f64, f64) {
        let mut e = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        let mut add = |x: f64, y: f64| {
            if x.is_finite() && y.is_finite() {
                e.0 = e.0.min(x);
                e.1 = e.1.max(x);
                e.2 = e.2.min(y);
                e.3 = e.3.max(y);
            }
        };
        match self {
            Series::Scatter(p) | Series::Curve(p) => p.iter().for_each(|&(x, y)| add(x, y)),
            Series::Histogram(b) => b.iter().for_each(|&(l, r, h)| {
                add(l, 0.0);
                add(r, h);
            }),
        }
        e
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Style {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Same scale on both axes (root clouds).
    pub equal_aspect: bool,
}

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// SVG document for the series, drawn in order on common axes.
pub fn emit_plot(series: &[Series], style: &Style) -> Result<String, Error> {
    if series.is_empty() || series.iter().all(|s| s.len() == 0) {
        return Err(Error::Plot("nothing to plot".into()));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        let e = s.extent();
        x0 = x0.min(e.0);
        x1 = x1.max(e.1);
        y0 = y0.min(e.2);
        y1 = y1.max(e.3);
    }
    if !(x0.is_finite() && y0.is_finite()) {
        return Err(Error::Plot("no finite points".into()));
    }
    if x1 <= x0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 <= y0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    let (mut sx, mut sy) = (pw / (x1 - x0), ph / (y1 - y0));
    if style.equal_aspect {
        let s = sx.min(sy);
        sx = s;
        sy = s;
    }
    let px = |x: f64| MARGIN + (x - x0) * sx;
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) * sy;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black" stroke-width="0.5"/>"#
    );
    let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(&style.title));
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0,
        escape(&style.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&style.y_label)
    );
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="{}" font-size="10">{x0:.4}</text>"#, HEIGHT - MARGIN + 14.0);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{x1:.4}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 14.0
    );
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{y0:.4}</text>"#, MARGIN - 4.0, HEIGHT - MARGIN);
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{y1:.4}</text>"#, MARGIN - 4.0, MARGIN + 8.0);

    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        match s {
            Series::Scatter(p) => {
                let _ = writeln!(out, r#"<g class="scatter" fill="{color}">"#);
                for &(x, y) in p {
                    if x.is_finite() && y.is_finite() {
                        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="1.2"/>"#, px(x), py(y));
                    }
                }
                let _ = writeln!(out, "</g>");
            }
            Series::Curve(p) => {
                let pts: Vec<String> = p
                    .iter()
                    .filter(|q| q.0.is_finite() && q.1.is_finite())
                    .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polyline class="curve" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    pts.join(" ")
                );
            }
            Series::Histogram(b) => {
                let _ = writeln!(out, r#"<g class="histogram" fill="{color}" fill-opacity="0.35" stroke="{color}">"#);
                for &(l, r, h) in b {
                    let h = if h.is_finite() { h } else { 0.0 };
                    let (top, bottom) = (py(h.max(y0)), py(y0.max(0.0).min(h)));
                    let _ = writeln!(
                        out,
                        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
                        px(l),
                        top,
                        (px(r) - px(l)).max(0.0),
                        (bottom - top).max(0.0)
                    );
                }
                let _ = writeln!(out, "</g>");
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_series_is_an_error() {
        assert!(emit_plot(&[], &Style::default()).is_err());
        assert!(emit_plot(&[Series::Scatter(vec![])], &Style::default()).is_err());
    }

    #[test]
    fn one_marker_per_point() {
        let pts = vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
        let svg = emit_plot(&[Series::Scatter(pts)], &Style { equal_aspect: true, ..Default::default() }).unwrap();
        assert_eq!(svg.matches("<circle").count(), 4);
    }

    #[test]
    fn one_bar_per_bin() {
        let bars: Vec<_> = (0..17).map(|i| (i as f64, i as f64 + 1.0, (i % 5) as f64)).collect();
        let curve = Series::Curve(vec![(0.0, 1.0), (17.0, 2.0)]);
        let svg = emit_plot(&[Series::Histogram(bars), curve], &Style::default()).unwrap();
        let g = svg.split(r#"class="histogram""#).nth(1).unwrap().split("</g>").next().unwrap();
        assert_eq!(g.matches("<rect").count(), 17);
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn output_is_deterministic() {
        let s = [Series::Curve(vec![(0.1, 0.2), (0.3, 0.7)])];
        let st = Style { title: "a < b".into(), ..Default::default() };
        assert_eq!(emit_plot(&s, &st).unwrap(), emit_plot(&s, &st).unwrap());
        assert!(emit_plot(&s, &st).unwrap().contains("a &lt; b"));
    }
}
