//! Minimal SVG line plots of a sweep. Derived from the rows only; the CSV is
//! the record.

use std::fmt::Write as _;

use crate::config::{Metric, Mode};
use crate::sweep::SweepResult;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;

const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn dash(mode: Mode) -> &'static str {
    match mode {
        Mode::Asymptotic => " stroke-dasharray=\"6 4\"",
        _ => "",
    }
}

/// Log-y for outage and BER, linear-y for capacity; x is transmit power.
pub fn to_svg(res: &SweepResult) -> String {
    let metric = res.rows.first().map(|r| r.metric).unwrap_or(Metric::Outage);
    let log_y = metric != Metric::Capacity;
    let ty = |v: f64| if log_y { v.log10() } else { v };
    let pts: Vec<_> = res
        .rows
        .iter()
        .filter_map(|r| {
            r.value
                .filter(|&v| v.is_finite() && (!log_y || v > 0.0))
                .map(|v| (r, ty(v)))
        })
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for (r, y) in &pts {
        x0 = x0.min(r.power_dbm);
        x1 = x1.max(r.power_dbm);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if pts.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if log_y {
        y0 = y0.floor().max(y1.ceil() - 12.0);
        y1 = y1.ceil();
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let sy = |y: f64| TOP + (y1 - y.clamp(y0, y1)) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (bx, by) = (sx(x0), sy(y0));
    let _ = writeln!(
        s,
        r#"<path d="M{LEFT} {TOP} V{by} H{}" fill="none" stroke="black"/>"#,
        sx(x1)
    );
    for i in 0..=5 {
        let x = x0 + (x1 - x0) * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x:.0}</text>"#,
            sx(x),
            by + 16.0
        );
    }
    let ticks: Vec<f64> = if log_y {
        (y0 as i64..=y1 as i64).map(|e| e as f64).collect()
    } else {
        (0..=5).map(|i| y0 + (y1 - y0) * i as f64 / 5.0).collect()
    };
    for y in ticks {
        let label = if log_y {
            format!("1e{}", y as i64)
        } else {
            format!("{y:.1}")
        };
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#,
            bx - 6.0,
            sy(y) + 4.0
        );
        let _ = writeln!(
            s,
            r##"<path d="M{bx} {:.1} H{:.1}" stroke="#ddd"/>"##,
            sy(y),
            sx(x1)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">transmit power (dBm)</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 10.0
    );
    let ylabel = match metric {
        Metric::Outage => "outage probability",
        Metric::Ber => "average BER",
        Metric::Capacity => "ergodic capacity (bits/s/Hz)",
    };
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.1}" transform="rotate(-90 14 {:.1})" text-anchor="middle">{ylabel}</text>"#,
        (TOP + H - BOTTOM) / 2.0,
        (TOP + H - BOTTOM) / 2.0
    );

    let mut series: Vec<(usize, Mode)> = pts.iter().map(|(r, _)| (r.k, r.mode)).collect();
    series.dedup();
    series.sort();
    series.dedup();
    for (i, (k, mode)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = pts
            .iter()
            .filter(|(r, _)| r.k == *k && r.mode == *mode)
            .map(|(r, y)| format!("{:.1},{:.1}", sx(r.power_dbm), sy(*y)))
            .collect();
        if *mode == Mode::Mc {
            for c in &coords {
                let (x, y) = c.split_once(',').unwrap();
                let _ = writeln!(
                    s,
                    r#"<circle cx="{x}" cy="{y}" r="2.5" fill="none" stroke="{color}"/>"#
                );
            }
        } else {
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{}/>"#,
                coords.join(" "),
                dash(*mode)
            );
        }
        let ly = TOP + 14.0 * i as f64 + 8.0;
        let lx = W - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<path d="M{lx} {ly} h18" stroke="{color}" stroke-width="1.5"{}/>"#,
            dash(*mode)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">K={k} {mode}</text>"#,
            lx + 24.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}
