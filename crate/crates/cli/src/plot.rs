//! Static SVG scatter plots of two embedding dimensions.

use std::fmt::Write;

pub const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];
const UNLABELED: &str = "#c0c0c0";

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

/// Points to draw: coordinates plus an optional class name per point
/// (`None` or an empty name draws the point as unlabeled).
pub struct Scatter<'a> {
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub labels: Option<&'a [String]>,
    /// Zero-based embedding columns shown on the axes.
    pub dims: (usize, usize),
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn range(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        (-1.0, 1.0)
    } else if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

/// Class names in first-appearance order, and each point's class slot.
fn classes(labels: Option<&[String]>, n: usize) -> (Vec<String>, Vec<Option<usize>>) {
    let mut names: Vec<String> = Vec::new();
    let mut slots = Vec::with_capacity(n);
    for i in 0..n {
        let name = labels.map(|l| l[i].as_str()).filter(|s| !s.is_empty());
        slots.push(name.map(|s| match names.iter().position(|c| c == s) {
            Some(k) => k,
            None => {
                names.push(s.to_string());
                names.len() - 1
            }
        }));
    }
    (names, slots)
}

pub fn render_svg(s: &Scatter<'_>) -> String {
    let n = s.xs.len();
    let (x0, x1) = range(s.xs);
    let (y0, y1) = range(s.ys);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + (v - x0) / (x1 - x0) * pw;
    let py = |v: f64| TOP + ph - (v - y0) / (y1 - y0) * ph;
    let (names, slots) = classes(s.labels, n);
    let (xi, yi) = (s.dims.0 + 1, s.dims.1 + 1);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="14">Z{xi}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="14" transform="rotate(-90 16 {:.2})">Z{yi}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );
    for (v, x, anchor) in [(x0, LEFT, "start"), (x1, LEFT + pw, "end")] {
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="{anchor}" font-family="sans-serif" font-size="10">{v:.4e}</text>"#,
            TOP + ph + 14.0
        );
    }
    for (v, y) in [(y0, TOP + ph), (y1, TOP + 8.0)] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{y:.2}" text-anchor="end" font-family="sans-serif" font-size="10">{v:.2e}</text>"#,
            LEFT - 4.0
        );
    }

    let _ = writeln!(out, r#"<g stroke="none" fill-opacity="0.8">"#);
    for ((slot, &x), &y) in slots.iter().zip(s.xs).zip(s.ys) {
        let fill = slot.map_or(UNLABELED, |k| PALETTE[k % PALETTE.len()]);
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{fill}"/>"#,
            px(x),
            py(y)
        );
    }
    let _ = writeln!(out, "</g>");

    let mut entries: Vec<(String, &str)> = names
        .iter()
        .enumerate()
        .map(|(k, name)| (escape(name), PALETTE[k % PALETTE.len()]))
        .collect();
    if s.labels.is_some() && slots.iter().any(Option::is_none) {
        entries.push(("unlabeled".into(), UNLABELED));
    }
    let lx = WIDTH - RIGHT + 15.0;
    let _ = writeln!(out, r#"<g class="legend" font-family="sans-serif" font-size="12">"#);
    for (k, (name, colour)) in entries.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{lx:.2}" y="{:.2}" width="10" height="10" fill="{colour}"/><text x="{:.2}" y="{:.2}">{name}</text>"#,
            y - 9.0,
            lx + 16.0,
            y
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_circle_per_point_and_legend_per_class() {
        let labels: Vec<String> = ["b", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let svg = render_svg(&Scatter {
            xs: &[0.0, 1.0, 2.0, 3.0],
            ys: &[1.0, 0.0, 1.0, 2.0],
            labels: Some(&labels),
            dims: (0, 2),
        });
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg.matches("<text x=\"").count() - 6, 3);
        assert!(svg.contains(">Z1</text>") && svg.contains(">Z3</text>"));
        // first appearance order: b gets the first colour
        assert!(svg.contains(&format!("fill=\"{}\"/><text x=\"521.00\" y=\"40.00\">b<", PALETTE[0])));
    }

    #[test]
    fn single_point_and_escaping() {
        let labels = vec!["<x&y>".to_string()];
        let svg = render_svg(&Scatter {
            xs: &[5.0],
            ys: &[5.0],
            labels: Some(&labels),
            dims: (0, 1),
        });
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains("&lt;x&amp;y&gt;"));
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn unlabeled_points_get_their_own_entry() {
        let labels = vec!["a".to_string(), String::new()];
        let svg = render_svg(&Scatter {
            xs: &[0.0, 1.0],
            ys: &[0.0, 1.0],
            labels: Some(&labels),
            dims: (0, 1),
        });
        assert!(svg.contains(">unlabeled</text>"));
        assert!(svg.contains(UNLABELED));
    }
}
