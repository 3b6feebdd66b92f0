//! Deterministic SVG rendering for log-log scaling charts.
//!
//! No plotting dependency: the charts here are simple enough (scatter
//! points, power-law fit lines, decade grid) that emitting the SVG
//! directly keeps the output byte-reproducible across runs and
//! platforms.

use crate::experiments::FitLine;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

const PALETTE: [&str; 4] = ["#1f6f8b", "#c65146", "#3a7d44", "#8d5a97"];

/// One plotted series: scatter points and an optional fitted line.
pub struct Series {
    /// Legend label.
    pub label: String,
    /// Raw (x, y) points; both coordinates must be positive.
    pub points: Vec<(f64, f64)>,
    /// Fit drawn across the x range when present.
    pub fit: Option<FitLine>,
}

/// Renders a log-log chart of the given series.
///
/// Returns the empty-chart shell when no series has positive points.
#[must_use]
pub fn render_loglog(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in series {
        for &(x, y) in &s.points {
            if x > 0.0 && y > 0.0 {
                xs.push(x.log10());
                ys.push(y.log10());
            }
        }
    }
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));
    if xs.is_empty() {
        svg.push_str("</svg>\n");
        return svg;
    }
    let (x0, x1) = padded_range(&xs);
    let (y0, y1) = padded_range(&ys);
    let to_px = |lx: f64| MARGIN_L + (lx - x0) / (x1 - x0) * (WIDTH - MARGIN_L - MARGIN_R);
    let to_py = |ly: f64| HEIGHT - MARGIN_B - (ly - y0) / (y1 - y0) * (HEIGHT - MARGIN_T - MARGIN_B);

    // decade grid and tick labels
    for d in decades(x0, x1) {
        let px = to_px(d);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#ddd\"/>\n",
            MARGIN_T,
            HEIGHT - MARGIN_B
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">1e{}</text>\n",
            HEIGHT - MARGIN_B + 16.0,
            d as i64
        ));
    }
    for d in decades(y0, y1) {
        let py = to_py(d);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#ddd\"/>\n",
            MARGIN_L,
            WIDTH - MARGIN_R
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">1e{}</text>\n",
            MARGIN_L - 6.0,
            py + 4.0,
            d as i64
        ));
    }
    // axes
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{:.1}\" height=\"{:.1}\" \
         fill=\"none\" stroke=\"#333\"/>\n",
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 12.0,
        escape(xlabel)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {:.1})\">{}</text>\n",
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        escape(ylabel)
    ));

    for (si, s) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        if let Some(fit) = &s.fit {
            let ya = fit.intercept + fit.slope * x0;
            let yb = fit.intercept + fit.slope * x1;
            svg.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
                 stroke=\"{color}\" stroke-dasharray=\"5 3\"/>\n",
                to_px(x0),
                to_py(ya.clamp(y0, y1)),
                to_px(x1),
                to_py(yb.clamp(y0, y1))
            ));
        }
        for &(x, y) in &s.points {
            if x > 0.0 && y > 0.0 {
                svg.push_str(&format!(
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.5\" fill=\"{color}\"/>\n",
                    to_px(x.log10()),
                    to_py(y.log10())
                ));
            }
        }
        // legend entry
        let ly = MARGIN_T + 14.0 + 16.0 * si as f64;
        svg.push_str(&format!(
            "<circle cx=\"{:.1}\" cy=\"{ly:.1}\" r=\"3.5\" fill=\"{color}\"/>\n",
            MARGIN_L + 12.0
        ));
        let suffix = s
            .fit
            .as_ref()
            .map(|f| format!(" (slope {:.2}, r2 {:.3})", f.slope, f.r2))
            .unwrap_or_default();
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\">{}{}</text>\n",
            MARGIN_L + 22.0,
            ly + 4.0,
            escape(&s.label),
            suffix
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Log-range with 5% padding; degenerate ranges widen to half a decade.
fn padded_range(logs: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in logs {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if (hi - lo) < 1e-9 {
        return (lo - 0.25, hi + 0.25);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn decades(lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut d = lo.ceil() as i64;
    while (d as f64) <= hi {
        out.push(d as f64);
        d += 1;
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
