//! Minimal deterministic SVG line plots: fixed viewport, fixed palette,
//! polylines in series order, no external plotting dependency. Non-finite
//! points split a series into separate polyline segments.

use std::io::Write;
use std::path::Path;

use crate::AppError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;

const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

pub fn write_svg(path: &Path, title: &str, series: &[Series]) -> Result<(), AppError> {
    let finite = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (x, y) in finite {
        x_min = x_min.min(*x);
        x_max = x_max.max(*x);
        y_min = y_min.min(*y);
        y_max = y_max.max(*y);
    }
    if x_min >= x_max || !x_min.is_finite() {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if y_min >= y_max || !y_min.is_finite() {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let pad_y = 0.05 * (y_max - y_min);
    y_min -= pad_y;
    y_max += pad_y;

    let to_px = |x: f64, y: f64| {
        let px = MARGIN + (x - x_min) / (x_max - x_min) * (WIDTH - 2.0 * MARGIN);
        let py = HEIGHT - MARGIN - (y - y_min) / (y_max - y_min) * (HEIGHT - 2.0 * MARGIN);
        (px, py)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "  <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#000000\" stroke-width=\"1\"/>\n",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        title
    ));
    // Axis range labels at the four corners of the plot box.
    out.push_str(&format!(
        "  <text x=\"{MARGIN}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
        HEIGHT - MARGIN + 16.0,
        fmt_axis(x_min)
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
         text-anchor=\"end\">{}</text>\n",
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 16.0,
        fmt_axis(x_max)
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
         text-anchor=\"end\">{}</text>\n",
        MARGIN - 4.0,
        HEIGHT - MARGIN,
        fmt_axis(y_min)
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
         text-anchor=\"end\">{}</text>\n",
        MARGIN - 4.0,
        MARGIN + 10.0,
        fmt_axis(y_max)
    ));

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        // Break at non-finite points.
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, out: &mut String| {
            if seg.len() >= 2 {
                out.push_str(&format!(
                    "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
                     points=\"{}\"/>\n",
                    seg.join(" ")
                ));
            }
            seg.clear();
        };
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                let (px, py) = to_px(x, y);
                segment.push(format!("{px:.2},{py:.2}"));
            } else {
                flush(&mut segment, &mut out);
            }
        }
        flush(&mut segment, &mut out);
        // Legend entry.
        let ly = MARGIN + 18.0 * i as f64 + 14.0;
        out.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" \
             stroke-width=\"2\"/>\n",
            WIDTH - MARGIN - 150.0,
            ly - 4.0,
            WIDTH - MARGIN - 126.0,
            ly - 4.0
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            WIDTH - MARGIN - 120.0,
            ly,
            s.name
        ));
    }
    out.push_str("</svg>\n");

    let mut f = std::fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

fn fmt_axis(v: f64) -> String {
    format!("{v:.4e}")
}
