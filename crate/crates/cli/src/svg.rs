//! Minimal SVG line plots.

use std::fmt::Write as _;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

pub struct Series<'a> {
    pub name: &'a str,
    pub y: &'a [f64],
}

pub struct Panel<'a> {
    pub title: &'a str,
    pub log10: bool,
    pub series: Vec<Series<'a>>,
}

const W: f64 = 640.0;
const H: f64 = 300.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 40.0;

/// Floor applied before taking log10.
const LOG_FLOOR: f64 = 1e-12;

fn transform(y: f64, log10: bool) -> Option<f64> {
    if !y.is_finite() {
        return None;
    }
    Some(if log10 { y.max(LOG_FLOOR).log10() } else { y })
}

fn nice_range(lo: f64, hi: f64, log10: bool) -> (f64, f64) {
    if log10 {
        return (lo.floor(), hi.ceil().max(lo.floor() + 1.0));
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn panel(out: &mut String, p: &Panel, x: &[f64], y0: f64) {
    let (x_lo, x_hi) = (x.first().copied().unwrap_or(0.0), x.last().copied().unwrap_or(1.0));
    let x_hi = if x_hi > x_lo { x_hi } else { x_lo + 1.0 };
    let ys = p.series.iter().flat_map(|s| s.y.iter().filter_map(|&v| transform(v, p.log10)));
    let (lo, hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let (lo, hi) = if lo.is_finite() { nice_range(lo, hi, p.log10) } else { (0.0, 1.0) };
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |v: f64| LEFT + (v - x_lo) / (x_hi - x_lo) * pw;
    let sy = |v: f64| y0 + TOP + (hi - v) / (hi - lo) * ph;

    let _ = writeln!(
        out,
        r##"<rect x="{LEFT}" y="{:.1}" width="{pw}" height="{ph}" fill="none" stroke="#000"/>"##,
        y0 + TOP
    );
    let _ = writeln!(out, r#"<text x="{LEFT}" y="{:.1}" font-size="13">{}</text>"#, y0 + TOP - 8.0, p.title);
    for k in 0..=4 {
        let v = lo + (hi - lo) * k as f64 / 4.0;
        let label = if p.log10 { format!("1e{v:.1}") } else { format!("{v:.4}") };
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{label}</text>"#,
            LEFT - 4.0,
            sy(v) + 3.0
        );
        let xv = x_lo + (x_hi - x_lo) * k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{xv:.3}</text>"#,
            sx(xv),
            y0 + H - BOTTOM + 14.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">t (us)</text>"#,
        LEFT + pw / 2.0,
        y0 + H - 8.0
    );
    for (i, s) in p.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = String::new();
        for (&t, &v) in x.iter().zip(s.y) {
            if let Some(v) = transform(v, p.log10) {
                let _ = write!(pts, "{:.2},{:.2} ", sx(t), sy(v));
            }
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.trim_end()
        );
        let ly = y0 + TOP + 12.0 + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            W - RIGHT + 10.0,
            W - RIGHT + 28.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
            W - RIGHT + 32.0,
            ly + 4.0,
            s.name
        );
    }
}

/// Stacks `panels` vertically over a shared time axis.
pub fn render(x: &[f64], panels: &[Panel]) -> String {
    let total = H * panels.len() as f64;
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{total}" viewBox="0 0 {W} {total}" font-family="sans-serif">"#
    );
    out.push('\n');
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    for (i, p) in panels.iter().enumerate() {
        panel(&mut out, p, x, H * i as f64);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_both_scales() {
        let x = [0.0, 1.0, 2.0];
        let y = [1.0, 0.5, 0.0];
        let s = render(
            &x,
            &[
                Panel { title: "lin", log10: false, series: vec![Series { name: "a", y: &y }] },
                Panel { title: "log", log10: true, series: vec![Series { name: "b", y: &y }] },
            ],
        );
        assert!(s.starts_with("<svg"));
        assert!(s.ends_with("</svg>\n"));
        assert_eq!(s.matches("<polyline").count(), 2);
        assert!(s.contains("1e-12.0"));
    }
}
