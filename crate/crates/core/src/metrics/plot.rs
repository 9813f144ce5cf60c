use std::fmt::Write;

/// A named polyline of `(budget, mse)` points.
#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 440.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Log-log plot of MSE against budget, with a `1/B` reference line.
/// Non-positive values are dropped.
pub fn loglog_svg(title: &str, series: &[Series]) -> String {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|&(b, m)| b > 0.0 && m > 0.0 && m.is_finite())
        .map(|(b, m)| (b.log10(), m.log10()))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 1.0f64, -1.0f64, 0.0f64);
    if !pts.is_empty() {
        x0 = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min).floor();
        x1 = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max).ceil();
        y0 = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).floor();
        y1 = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max).ceil();
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, escape(title));
    for d in (x0 as i32)..=(x1 as i32) {
        let x = sx(f64::from(d));
        let _ = writeln!(s, r##"<line x1="{x:.1}" y1="{}" x2="{x:.1}" y2="{}" stroke="#ddd"/>"##, MARGIN, H - MARGIN);
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{}" text-anchor="middle">1e{d}</text>"#, H - MARGIN + 18.0);
    }
    for d in (y0 as i32)..=(y1 as i32) {
        let y = sy(f64::from(d));
        let _ = writeln!(s, r##"<line x1="{}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#ddd"/>"##, MARGIN, W - MARGIN);
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">1e{d}</text>"#, MARGIN - 6.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">walks per pixel</text>"#, W / 2.0, H - 14.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">masked MSE</text>"#,
        H / 2.0,
        H / 2.0
    );

    // 1/B through the first point of the first series.
    if let Some(&(bx, by)) = series
        .first()
        .and_then(|s| s.points.iter().find(|&&(b, m)| b > 0.0 && m > 0.0 && m.is_finite()))
    {
        let (lx, ly) = (bx.log10(), by.log10());
        let _ = writeln!(
            s,
            r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#888" stroke-dasharray="5,4"/>"##,
            sx(lx),
            sy(ly),
            sx(x1),
            sy(ly - (x1 - lx))
        );
    }

    for (n, ser) in series.iter().enumerate() {
        let c = COLORS[n % COLORS.len()];
        let path: Vec<String> = ser
            .points
            .iter()
            .filter(|&&(b, m)| b > 0.0 && m > 0.0 && m.is_finite())
            .map(|&(b, m)| format!("{:.1},{:.1}", sx(b.log10()), sy(m.log10())))
            .collect();
        if !path.is_empty() {
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{c}" stroke-width="2" points="{}"/>"#, path.join(" "));
        }
        let ly = MARGIN + 16.0 * n as f64;
        let _ = writeln!(s, r#"<rect x="{}" y="{:.1}" width="12" height="3" fill="{c}"/>"#, W - MARGIN - 130.0, ly);
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}">{}</text>"#, W - MARGIN - 112.0, ly + 5.0, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_has_one_polyline_per_series() {
        let s = |l: &str, c: f64| Series {
            label: l.into(),
            points: (0..6).map(|k| (f64::from(1 << k), c / f64::from(1 << k))).collect(),
        };
        let svg = loglog_svg("a < b", &[s("poisson", 1.0), s("laplace", 0.1)]);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("a &lt; b"));
    }

    #[test]
    fn empty_input_still_renders() {
        let svg = loglog_svg("empty", &[]);
        assert!(svg.contains("</svg>"));
    }
}
