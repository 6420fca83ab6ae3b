//! Minimal self-contained SVG line plots.

use std::fmt::Write;

use emlab_core::Error;

use crate::table::Table;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x: String,
    pub ys: Vec<String>,
    pub log_y: bool,
    pub caption: String,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 80.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return None;
    }
    if hi - lo <= 1e-12 * lo.abs().max(1.0) {
        let pad = 0.5 * lo.abs().max(1.0);
        return Some((lo - pad, hi + pad));
    }
    Some((lo, hi))
}

/// One polyline per y column; rows with missing, non-finite, or (under
/// `log_y`) nonpositive values are skipped.
pub fn render_svg(table: &Table, spec: &PlotSpec) -> Result<String, Error> {
    if table.rows.is_empty() {
        return Err(Error::InvalidArgument(format!("table `{}` is empty", table.name)));
    }
    let xs = table.numbers(&spec.x);
    if xs.is_empty() {
        return Err(Error::InvalidArgument(format!("no column `{}`", spec.x)));
    }
    let mut series = Vec::new();
    for name in &spec.ys {
        let ys = table.numbers(name);
        if ys.is_empty() {
            return Err(Error::InvalidArgument(format!("no column `{name}`")));
        }
        let pts: Vec<(f64, f64)> = xs
            .iter()
            .zip(&ys)
            .filter_map(|(x, y)| match (x, y) {
                (Some(x), Some(y)) if x.is_finite() && y.is_finite() && (!spec.log_y || *y > 0.0) => {
                    Some((*x, if spec.log_y { y.log10() } else { *y }))
                }
                _ => None,
            })
            .collect();
        series.push((name.clone(), pts));
    }
    let all = || series.iter().flat_map(|(_, p)| p.iter());
    let (x_lo, x_hi) = bounds(all().map(|p| p.0))
        .ok_or_else(|| Error::InvalidArgument(format!("table `{}` has no plottable values", table.name)))?;
    let (y_lo, y_hi) = bounds(all().map(|p| p.1)).unwrap_or((0.0, 1.0));

    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * pw;
    let sy = |y: f64| TOP + ph - (y - y_lo) / (y_hi - y_lo) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = WIDTH,
        h = HEIGHT
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        fmt(LEFT + pw / 2.0),
        escape(&spec.title)
    );
    let _ = writeln!(
        s,
        r#"<g class="axes" stroke="black"><line x1="{l}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{l}" y1="{t}" x2="{l}" y2="{b}"/></g>"#,
        l = fmt(LEFT),
        r = fmt(LEFT + pw),
        t = fmt(TOP),
        b = fmt(TOP + ph)
    );
    for k in 0..=4 {
        let fx = x_lo + (x_hi - x_lo) * k as f64 / 4.0;
        let fy = y_lo + (y_hi - y_lo) * k as f64 / 4.0;
        let ylabel = if spec.log_y { format!("1e{fy:.2}") } else { label(fy) };
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            fmt(sx(fx)),
            fmt(TOP + ph + 18.0),
            label(fx)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            fmt(LEFT - 6.0),
            fmt(sy(fy) + 4.0),
            ylabel
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        fmt(LEFT + pw / 2.0),
        fmt(TOP + ph + 38.0),
        escape(&spec.x)
    );
    let y_title = if spec.log_y { "value (log scale)" } else { "value" };
    let _ = writeln!(
        s,
        r#"<text x="16" y="{y}" text-anchor="middle" transform="rotate(-90 16 {y})">{}</text>"#,
        y_title,
        y = fmt(TOP + ph / 2.0)
    );
    for (n, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[n % COLORS.len()];
        if !pts.is_empty() {
            let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{},{}", fmt(sx(x)), fmt(sy(y)))).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                coords.join(" ")
            );
        }
        let ly = TOP + 14.0 + 18.0 * n as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{a}" y1="{y}" x2="{b}" y2="{y}" stroke="{color}" stroke-width="2"/><text x="{c}" y="{t}">{}</text>"#,
            escape(name),
            a = fmt(WIDTH - RIGHT + 12.0),
            b = fmt(WIDTH - RIGHT + 32.0),
            c = fmt(WIDTH - RIGHT + 38.0),
            y = fmt(ly),
            t = fmt(ly + 4.0)
        );
    }
    let _ = writeln!(
        s,
        r#"<text class="caption" x="{}" y="{}" font-size="10">{}</text>"#,
        fmt(LEFT),
        fmt(HEIGHT - 12.0),
        escape(&spec.caption)
    );
    s.push_str("</svg>\n");
    Ok(s)
}
