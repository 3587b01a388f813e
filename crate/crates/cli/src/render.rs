use std::f64::consts::TAU;
use std::fmt::Write;

use brieskorn_core::{count_cusps, critical_value, singular_circles, CuspCensus, DeformationParams, PlanePoint};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSpec {
    pub samples: usize,
    pub width: u32,
    pub height: u32,
    /// Fraction of each side kept free around the curve.
    pub margin: f64,
    pub mark_cusps: bool,
    pub stroke_width: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self { samples: 1024, width: 800, height: 800, margin: 0.05, mark_cusps: true, stroke_width: 1.5 }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> CliResult<()> {
        if self.samples < 256 || !self.samples.is_power_of_two() {
            return Err(CliError::Usage(format!("--samples must be a power of two >= 256, got {}", self.samples)));
        }
        if self.width < 64 || self.height < 64 {
            return Err(CliError::Usage("width and height must be at least 64 pixels".into()));
        }
        if !(0.0..0.5).contains(&self.margin) || self.stroke_width.is_nan() || self.stroke_width <= 0.0 {
            return Err(CliError::Usage("margin must lie in [0, 0.5) and stroke width be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub theta: f64,
    pub value: PlanePoint,
    pub is_cusp: bool,
}

/// The image `P_k(theta)` of one singular circle, sampled uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalCurve {
    pub k: u32,
    pub points: Vec<CurveSample>,
    /// Sample parameters flagged as cusps.
    pub cusp_marks: Vec<f64>,
}

/// Samples every circle at `theta_i = 2 pi i / samples`. Each located cusp is
/// snapped to its nearest sample, so markers and CSV rows always agree.
pub fn critical_curves(params: &DeformationParams, samples: usize) -> (Vec<CriticalCurve>, CuspCensus) {
    let census = count_cusps(params);
    let curves = singular_circles(params)
        .iter()
        .zip(&census.per_circle)
        .map(|(spec, circle)| {
            let mut points: Vec<CurveSample> = (0..samples)
                .map(|i| {
                    let theta = TAU * i as f64 / samples as f64;
                    CurveSample { theta, value: critical_value(spec, theta), is_cusp: false }
                })
                .collect();
            for &t in &circle.cusp_thetas {
                let i = (t / TAU * samples as f64).round() as usize % samples;
                points[i].is_cusp = true;
            }
            let cusp_marks = points.iter().filter(|s| s.is_cusp).map(|s| s.theta).collect();
            CriticalCurve { k: spec.k, points, cusp_marks }
        })
        .collect();
    (curves, census)
}

pub const CSV_HEADER: &str = "k,theta,re,im,is_cusp";

pub fn to_csv(curves: &[CriticalCurve]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in curves {
        for s in &c.points {
            let _ =
                writeln!(out, "{},{:.16e},{:.16e},{:.16e},{}", c.k, s.theta, s.value.x, s.value.y, u8::from(s.is_cusp));
        }
    }
    out
}

struct Viewport {
    x0: f64,
    y0: f64,
    scale: f64,
    ox: f64,
    oy: f64,
    height: f64,
}

impl Viewport {
    fn fit(curves: &[CriticalCurve], spec: &RenderSpec) -> Self {
        let (mut xmin, mut xmax, mut ymin, mut ymax) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for s in curves.iter().flat_map(|c| &c.points) {
            xmin = xmin.min(s.value.x);
            xmax = xmax.max(s.value.x);
            ymin = ymin.min(s.value.y);
            ymax = ymax.max(s.value.y);
        }
        let (w, h) = (spec.width as f64, spec.height as f64);
        let (inner_w, inner_h) = (w * (1.0 - 2.0 * spec.margin), h * (1.0 - 2.0 * spec.margin));
        let (dx, dy) = ((xmax - xmin).max(1e-300), (ymax - ymin).max(1e-300));
        let scale = (inner_w / dx).min(inner_h / dy);
        // center the fitted box
        let ox = (w - dx * scale) / 2.0;
        let oy = (h - dy * scale) / 2.0;
        Self { x0: xmin, y0: ymin, scale, ox, oy, height: h }
    }

    /// Pixel coordinates, y pointing up.
    fn map(&self, p: PlanePoint) -> (f64, f64) {
        let x = self.ox + (p.x - self.x0) * self.scale;
        let y = self.height - (self.oy + (p.y - self.y0) * self.scale);
        (x, y)
    }
}

const PALETTE: [&str; 6] = ["#1f4e9c", "#b8431e", "#2e7d32", "#6a1b9a", "#00838f", "#8d6e00"];

pub fn to_svg(curves: &[CriticalCurve], spec: &RenderSpec) -> String {
    let vp = Viewport::fit(curves, spec);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = spec.width,
        h = spec.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for c in curves {
        let color = PALETTE[c.k as usize % PALETTE.len()];
        let mut d = String::new();
        for (i, s) in c.points.iter().enumerate() {
            let (x, y) = vp.map(s.value);
            let _ = write!(d, "{}{x:.4} {y:.4}", if i == 0 { "M" } else { " L" });
        }
        d.push_str(" Z");
        let _ = writeln!(
            out,
            r#"<path id="circle-{}" d="{d}" fill="none" stroke="{color}" stroke-width="{}"/>"#,
            c.k, spec.stroke_width
        );
    }
    if spec.mark_cusps {
        for c in curves {
            for s in c.points.iter().filter(|s| s.is_cusp) {
                let (x, y) = vp.map(s.value);
                let _ = writeln!(
                    out,
                    r#"<circle class="cusp" data-k="{}" data-theta="{:.16e}" cx="{x:.4}" cy="{y:.4}" r="{}" fill="black"/>"#,
                    c.k,
                    s.theta,
                    3.0 * spec.stroke_width
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
