//! Minimal SVG line plots: log-scale y axis, linear or log x axis, one
//! polyline per trace with a small legend. File emission only.

use anyhow::{bail, Result};

pub struct Series {
    pub name: String,
    /// (x, y) with y > 0; nonpositive values cannot be drawn on the log
    /// axis and are filtered by the caller.
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;

const COLORS: [&str; 8] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];

pub fn render_svg(series: &[Series], x_label: &str, y_label: &str, log_x: bool) -> Result<String> {
    if series.is_empty() {
        bail!("no traces to plot");
    }
    let drawable: Vec<&Series> = series.iter().filter(|s| !s.points.is_empty()).collect();

    let xf = |x: f64| if log_x { x.max(1.0).log10() } else { x };
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in &drawable {
        for &(x, y) in &s.points {
            x_min = x_min.min(xf(x));
            x_max = x_max.max(xf(x));
            y_min = y_min.min(y.log10());
            y_max = y_max.max(y.log10());
        }
    }
    if !x_min.is_finite() {
        // Every series was empty (e.g. all gaps were exactly zero): emit an
        // annotated empty frame rather than failing the whole run.
        x_min = 0.0;
        x_max = 1.0;
        y_min = -1.0;
        y_max = 0.0;
    }
    if (x_max - x_min).abs() < 1e-12 {
        x_max = x_min + 1.0;
    }
    if (y_max - y_min).abs() < 1e-12 {
        y_max = y_min + 1.0;
    }

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let px = |x: f64| MARGIN_L + (xf(x) - x_min) / (x_max - x_min) * plot_w;
    let py = |y: f64| MARGIN_T + (y_max - y.log10()) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"#333\"/>\n"
    ));

    // y ticks at integer powers of ten
    let y_lo = y_min.floor() as i64;
    let y_hi = y_max.ceil() as i64;
    let mut decade = y_lo;
    while decade <= y_hi {
        let y = 10f64.powi(decade as i32);
        let yy = py(y);
        if (MARGIN_T..=MARGIN_T + plot_h).contains(&yy) {
            svg.push_str(&format!(
                "<line x1=\"{MARGIN_L}\" y1=\"{yy:.1}\" x2=\"{:.1}\" y2=\"{yy:.1}\" stroke=\"#ddd\"/>\n",
                MARGIN_L + plot_w
            ));
            svg.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">1e{decade}</text>\n",
                MARGIN_L - 6.0,
                yy + 4.0
            ));
        }
        decade += 1.max(((y_hi - y_lo) / 10).max(1));
    }

    // x ticks: four evenly spaced labels in transformed coordinates
    for i in 0..=4 {
        let t = x_min + (x_max - x_min) * i as f64 / 4.0;
        let xx = MARGIN_L + (t - x_min) / (x_max - x_min) * plot_w;
        let label = if log_x { format!("1e{t:.1}") } else { format!("{t:.0}") };
        svg.push_str(&format!(
            "<text x=\"{xx:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{label}</text>\n",
            MARGIN_T + plot_h + 18.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">{x_label}</text>\n",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 12.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{y_label}</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0
    ));

    for (i, s) in drawable.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        // Subsample long traces; 2000 points per line is plenty for a plot.
        let stride = (s.points.len() / 2000).max(1);
        let mut d = String::new();
        for (j, &(x, y)) in s.points.iter().enumerate() {
            if j % stride != 0 && j + 1 != s.points.len() {
                continue;
            }
            d.push_str(if d.is_empty() { "M" } else { "L" });
            d.push_str(&format!("{:.2} {:.2}", px(x), py(y)));
        }
        svg.push_str(&format!("<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"));
        let ly = MARGIN_T + 16.0 + 18.0 * i as f64;
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            WIDTH - MARGIN_R + 10.0,
            WIDTH - MARGIN_R + 34.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">{}</text>\n",
            WIDTH - MARGIN_R + 40.0,
            ly + 4.0,
            s.name
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
