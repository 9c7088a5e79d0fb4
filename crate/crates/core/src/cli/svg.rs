//! Minimal SVG histograms: grouped bars, an overlaid reference curve, axes.

use std::fmt::Write;

pub struct Series<'a> {
    pub label: &'a str,
    pub values: &'a [f64],
    pub color: &'a str,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 360.0;
const LEFT: f64 = 56.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 40.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Grouped bar chart of `series` with `curve` drawn as a polyline over the
/// bin centres. All series must have the same length.
pub fn histogram_svg(title: &str, series: &[Series<'_>], curve: Option<Series<'_>>) -> String {
    let bins = series.first().map_or(0, |s| s.values.len()).max(curve.as_ref().map_or(0, |c| c.values.len()));
    let peak =
        series.iter().chain(curve.as_ref()).flat_map(|s| s.values.iter().copied()).fold(0.0_f64, f64::max).max(1e-12);
    let y_max = (peak * 1.1 * 20.0).ceil() / 20.0;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let bin_w = plot_w / bins.max(1) as f64;
    let bar_w = bin_w * 0.8 / series.len().max(1) as f64;
    let x0 = |bin: usize| LEFT + bin as f64 * bin_w;
    let y = |v: f64| TOP + plot_h * (1.0 - v / y_max);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{LEFT}" y="18" font-size="14">{}</text>"#, escape(title));
    for (k, ser) in series.iter().enumerate() {
        for (bin, v) in ser.values.iter().enumerate() {
            let top = y(*v);
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                x0(bin) + bin_w * 0.1 + k as f64 * bar_w,
                top,
                bar_w,
                (TOP + plot_h - top).max(0.0),
                ser.color
            );
        }
    }
    if let Some(c) = &curve {
        let pts: Vec<String> =
            c.values.iter().enumerate().map(|(bin, v)| format!("{:.2},{:.2}", x0(bin) + bin_w / 2.0, y(*v))).collect();
        let _ =
            writeln!(s, r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#, pts.join(" "), c.color);
    }
    // axes and ticks
    let base = TOP + plot_h;
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#, WIDTH - RIGHT);
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{base}" stroke="black"/>"#);
    for i in 0..=4 {
        let v = y_max * i as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.3}</text>"#, LEFT - 4.0, y(v) + 4.0);
    }
    let step = (bins / 8).max(1);
    for bin in (0..bins).step_by(step) {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{bin}</text>"#,
            x0(bin) + bin_w / 2.0,
            base + 14.0
        );
    }
    // legend
    let mut lx = LEFT + 8.0;
    for ser in series.iter().chain(curve.as_ref()) {
        let _ = writeln!(s, r#"<rect x="{lx:.2}" y="{}" width="10" height="10" fill="{}"/>"#, TOP - 14.0, ser.color);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{}">{}</text>"#, lx + 14.0, TOP - 5.0, escape(ser.label));
        lx += 24.0 + 7.0 * ser.label.len() as f64;
    }
    s.push_str("</svg>\n");
    s
}
