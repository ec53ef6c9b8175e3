//! Minimal static SVG charts.

use std::fmt::Write;

use pfl_core::sweep::{MassSource, SweepResult, Variant};
use pfl_core::{BodyRegion, CollisionTrajectory, ContactMode, LoopLog};

const MODE_COLORS: [(ContactMode, &str); 3] = [
    (ContactMode::Transient, "#1f77b4"),
    (ContactMode::QuasiStaticFree, "#ff7f0e"),
    (ContactMode::QuasiStaticClamped, "#2ca02c"),
];

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn star(cx: f64, cy: f64, r: f64) -> String {
    let mut pts = Vec::with_capacity(10);
    for i in 0..10 {
        let rad = if i % 2 == 0 { r } else { r * 0.45 };
        let a = -std::f64::consts::FRAC_PI_2 + i as f64 * std::f64::consts::PI / 5.0;
        pts.push(format!("{:.2},{:.2}", cx + rad * a.cos(), cy + rad * a.sin()));
    }
    pts.join(" ")
}

/// Per-region boxplots of the directional-mass limits, with star markers for
/// the constant-mass limits. Log-scaled speed axis.
pub fn boxplot_svg(result: &SweepResult) -> String {
    let modes: Vec<(ContactMode, &str)> = MODE_COLORS
        .iter()
        .copied()
        .filter(|(m, _)| result.config.variants.iter().any(|v| v.mode == *m))
        .collect();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for d in &result.distributions {
        lo = lo.min(d.stats.whisker_low).min(d.stats.min);
        hi = hi.max(d.stats.whisker_high).max(d.stats.max);
    }
    let (lo, hi) = (lo * 0.8, hi * 1.25);
    let (left, right, top, bottom) = (70.0, 20.0, 40.0, 110.0);
    let slot = 22.0;
    let group = slot * modes.len().max(1) as f64 + 18.0;
    let w = left + right + group * BodyRegion::ALL.len() as f64;
    let h = 520.0;
    let plot_h = h - top - bottom;
    let y = |v: f64| top + plot_h * (1.0 - (v.ln() - lo.ln()) / (hi.ln() - lo.ln()));

    let mut s = String::new();
    header(&mut s, w, h);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">Admissible pre-collision speed by body region</text>"#,
        w / 2.0
    );
    // decade ticks with 2x and 5x minors
    let mut decade = 10f64.powf(lo.log10().floor());
    while decade <= hi {
        for m in [1.0, 2.0, 5.0] {
            let v = decade * m;
            if v < lo || v > hi {
                continue;
            }
            let yy = y(v);
            let _ = writeln!(
                s,
                r##"<line x1="{left}" x2="{}" y1="{yy:.2}" y2="{yy:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"##,
                w - right,
                left - 6.0,
                yy + 4.0,
                v
            );
        }
        decade *= 10.0;
    }
    let _ = writeln!(
        s,
        r#"<text transform="translate(18,{}) rotate(-90)" text-anchor="middle">v0,max [m/s]</text>"#,
        top + plot_h / 2.0
    );
    let _ = writeln!(
        s,
        r##"<rect x="{left}" y="{top}" width="{}" height="{plot_h}" fill="none" stroke="#333"/>"##,
        w - left - right
    );

    for (g, &region) in BodyRegion::ALL.iter().enumerate() {
        let gx = left + g as f64 * group + 9.0;
        for (k, &(mode, color)) in modes.iter().enumerate() {
            let cx = gx + slot * (k as f64 + 0.5);
            if let Some(d) = result.distribution(region, Variant::new(mode, MassSource::Directional)) {
                let b = &d.stats;
                let half = slot * 0.35;
                let _ = writeln!(
                    s,
                    r#"<line x1="{cx:.2}" x2="{cx:.2}" y1="{:.2}" y2="{:.2}" stroke="{color}"/>"#,
                    y(b.whisker_low),
                    y(b.whisker_high)
                );
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.35" stroke="{color}"/>"#,
                    cx - half,
                    y(b.q3),
                    2.0 * half,
                    (y(b.q1) - y(b.q3)).max(0.5)
                );
                let _ = writeln!(
                    s,
                    r#"<line x1="{:.2}" x2="{:.2}" y1="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
                    cx - half,
                    cx + half,
                    y(b.median),
                    y(b.median)
                );
            }
            if let Some(d) = result.distribution(region, Variant::new(mode, MassSource::Constant)) {
                let _ = writeln!(
                    s,
                    r##"<polygon points="{}" fill="{color}" stroke="#000" stroke-width="0.5"/>"##,
                    star(cx, y(d.stats.mean), 5.5)
                );
            }
        }
        let lx = gx + group / 2.0 - 9.0;
        let ly = top + plot_h + 12.0;
        let _ = writeln!(
            s,
            r#"<text transform="translate({lx:.2},{ly:.2}) rotate(40)">{}</text>"#,
            esc(region.display_name())
        );
    }
    for (k, &(mode, color)) in modes.iter().enumerate() {
        let lx = left + 10.0 + k as f64 * 150.0;
        let _ = writeln!(
            s,
            r#"<rect x="{lx}" y="{}" width="12" height="12" fill="{color}" fill-opacity="0.5" stroke="{color}"/><text x="{}" y="{}">{}</text>"#,
            h - 22.0,
            lx + 16.0,
            h - 12.0,
            mode.short_label()
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">boxes: reflected mass; stars: constant {:.3} kg</text>"#,
        w - right,
        h - 12.0,
        result.constant_mass
    );
    s.push_str("</svg>\n");
    s
}

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    dashed: bool,
    points: Vec<(f64, f64)>,
}

fn decimate(points: Vec<(f64, f64)>, max: usize) -> Vec<(f64, f64)> {
    if points.len() <= max {
        return points;
    }
    let stride = points.len().div_ceil(max);
    let last = *points.last().expect("non-empty");
    let mut out: Vec<_> = points.into_iter().step_by(stride).collect();
    if out.last() != Some(&last) {
        out.push(last);
    }
    out
}

fn line_chart(title: &str, x_label: &str, y_label: &str, series: Vec<Series>, marker_x: Option<f64>) -> String {
    let (w, h) = (720.0, 420.0);
    let (left, right, top, bottom) = (70.0, 20.0, 40.0, 60.0);
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let sx = |x: f64| left + pw * (x - x0) / (x1 - x0);
    let sy = |y: f64| top + ph * (1.0 - (y - y0) / (y1 - y0));

    let mut s = String::new();
    header(&mut s, w, h);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        w / 2.0,
        esc(title)
    );
    let _ = writeln!(
        s,
        r##"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
    );
    for i in 0..=5 {
        let fx = x0 + (x1 - x0) * i as f64 / 5.0;
        let fy = y0 + (y1 - y0) * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{:.3}</text><text x="{}" y="{:.2}" text-anchor="end">{:.3}</text>"#,
            sx(fx),
            h - bottom + 16.0,
            fx,
            left - 6.0,
            sy(fy) + 4.0,
            fy
        );
    }
    if y0 < 0.0 && y1 > 0.0 {
        let _ = writeln!(
            s,
            r##"<line x1="{left}" x2="{}" y1="{:.2}" y2="{:.2}" stroke="#bbb"/>"##,
            w - right,
            sy(0.0),
            sy(0.0)
        );
    }
    if let Some(mx) = marker_x {
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" x2="{:.2}" y1="{top}" y2="{}" stroke="#888" stroke-dasharray="4 3"/>"##,
            sx(mx),
            sx(mx),
            top + ph
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        left + pw / 2.0,
        h - 18.0,
        esc(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(18,{}) rotate(-90)" text-anchor="middle">{}</text>"#,
        top + ph / 2.0,
        esc(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let path: Vec<String> = ser
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let dash = if ser.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
            path.join(" "),
            ser.color
        );
        let lx = left + 10.0 + 130.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" x2="{}" y1="{}" y2="{}" stroke="{}" stroke-width="2"{dash}/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            top + 12.0,
            top + 12.0,
            ser.color,
            lx + 24.0,
            top + 16.0,
            esc(ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn trajectory_svg(traj: &CollisionTrajectory, t_star: f64) -> String {
    let pick =
        |f: fn(&pfl_core::TrajectorySample) -> f64| decimate(traj.samples.iter().map(|p| (p.t, f(p))).collect(), 2000);
    line_chart(
        "Impact velocities",
        "t [s]",
        "velocity [m/s]",
        vec![
            Series {
                label: "robot",
                color: "#1f77b4",
                dashed: false,
                points: pick(|p| p.v_r),
            },
            Series {
                label: "human",
                color: "#d62728",
                dashed: false,
                points: pick(|p| p.v_h),
            },
        ],
        Some(t_star),
    )
}

pub fn filter_svg(log: &LoopLog, v0_max: f64) -> String {
    let pick =
        |f: fn(&pfl_core::filter::LoopRow) -> f64| decimate(log.rows.iter().map(|r| (r.t, f(r))).collect(), 2000);
    let t_end = log.rows.last().map_or(0.0, |r| r.t);
    line_chart(
        "Filtered velocity loop",
        "t [s]",
        "velocity [m/s]",
        vec![
            Series {
                label: "nominal",
                color: "#999999",
                dashed: true,
                points: pick(|r| r.v_nominal),
            },
            Series {
                label: "plant",
                color: "#1f77b4",
                dashed: false,
                points: pick(|r| r.v),
            },
            Series {
                label: "v0,max",
                color: "#d62728",
                dashed: true,
                points: vec![(0.0, v0_max), (t_end, v0_max)],
            },
        ],
        None,
    )
}
