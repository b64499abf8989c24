//! Minimal self-contained SVG line charts. Polylines keep their points in
//! data coordinates inside one transformed group, so the numbers in the
//! document are exactly the sampled values.

use std::fmt::Write;

use moreau::fmt::{round_trip, significant};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;
const LEGEND: f64 = 150.0;
const PALETTE: [&str; 8] = [
    "#000000", "#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Join the last point back to the first.
    pub closed: bool,
}

pub struct Chart {
    pub title: String,
    pub series: Vec<Series>,
    /// Same scale on both axes.
    pub equal_aspect: bool,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Chart {
    fn frame(&self) -> Frame {
        let finite = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|p| p.0.is_finite() && p.1.is_finite());
        let mut f = Frame {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for &(x, y) in finite {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        if !f.x0.is_finite() {
            f = Frame { x0: -1.0, x1: 1.0, y0: -1.0, y1: 1.0 };
        }
        for (lo, hi) in [(&mut f.x0, &mut f.x1), (&mut f.y0, &mut f.y1)] {
            if *hi - *lo <= f64::EPSILON * (1.0 + lo.abs()) {
                *lo -= 0.5;
                *hi += 0.5;
            }
        }
        f
    }

    pub fn render(&self) -> String {
        let fr = self.frame();
        let plot_w = WIDTH - 2.0 * MARGIN - LEGEND;
        let plot_h = HEIGHT - 2.0 * MARGIN;
        let mut sx = plot_w / (fr.x1 - fr.x0);
        let mut sy = plot_h / (fr.y1 - fr.y0);
        if self.equal_aspect {
            sx = sx.min(sy);
            sy = sx;
        }

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(out, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{plot_w}" height="{plot_h}" fill="none" stroke="gray"/>"#
        );

        let _ = writeln!(
            out,
            r#"<g class="data" transform="translate({MARGIN} {}) scale({} {}) translate({} {})">"#,
            MARGIN + plot_h,
            round_trip(sx),
            round_trip(-sy),
            round_trip(-fr.x0),
            round_trip(-fr.y0)
        );
        let axis = |out: &mut String, a: (f64, f64), b: (f64, f64)| {
            let _ = writeln!(
                out,
                r#"<line class="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="dimgray" stroke-width="1" vector-effect="non-scaling-stroke"/>"#,
                round_trip(a.0),
                round_trip(a.1),
                round_trip(b.0),
                round_trip(b.1)
            );
        };
        let (y_axis, x_axis) = (0f64.clamp(fr.x0, fr.x1), 0f64.clamp(fr.y0, fr.y1));
        axis(&mut out, (fr.x0, x_axis), (fr.x1, x_axis));
        axis(&mut out, (y_axis, fr.y0), (y_axis, fr.y1));
        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            for run in finite_runs(&s.points) {
                let tag = if s.closed && run.len() == s.points.len() { "polygon" } else { "polyline" };
                let pts: Vec<String> = run
                    .iter()
                    .map(|p| format!("{},{}", round_trip(p.0), round_trip(p.1)))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<{tag} class="series" data-series="{i}" fill="none" stroke="{color}" stroke-width="1.5" vector-effect="non-scaling-stroke" points="{}"/>"#,
                    pts.join(" ")
                );
            }
        }
        out.push_str("</g>\n");

        let label = |out: &mut String, x: f64, y: f64, anchor: &str, text: &str| {
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{}</text>"#,
                escape(text)
            );
        };
        let bottom = MARGIN + plot_h;
        label(&mut out, MARGIN, bottom + 16.0, "start", &significant(fr.x0, 4));
        label(&mut out, MARGIN + plot_w, bottom + 16.0, "end", &significant(fr.x1, 4));
        label(&mut out, MARGIN - 4.0, bottom, "end", &significant(fr.y0, 4));
        label(&mut out, MARGIN - 4.0, MARGIN + 8.0, "end", &significant(fr.y1, 4));
        label(&mut out, WIDTH / 2.0, MARGIN / 2.0, "middle", &self.title);

        let lx = WIDTH - MARGIN - LEGEND + 16.0;
        out.push_str("<g class=\"legend\">\n");
        for (i, s) in self.series.iter().enumerate() {
            let y = MARGIN + 12.0 + 18.0 * i as f64;
            let _ = writeln!(
                out,
                r#"<line x1="{lx}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="2"/>"#,
                lx + 20.0,
                PALETTE[i % PALETTE.len()]
            );
            label(&mut out, lx + 26.0, y + 4.0, "start", &s.label);
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}

/// Maximal runs of points with finite coordinates.
fn finite_runs(points: &[(f64, f64)]) -> Vec<&[(f64, f64)]> {
    points
        .split(|p| !(p.0.is_finite() && p.1.is_finite()))
        .filter(|run| !run.is_empty())
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
