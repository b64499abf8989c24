//! Smoothing of planar gauges through `h_r = sqrt(e_r(f^2))`.
//!
//! For a gauge `f` (nonnegative, positively homogeneous, convex, `f(0) = 0`)
//! the envelope `g_r = e_r(f^2)` is positively homogeneous of degree two, so
//! `h_r` is again a gauge. It is differentiable away from the kernel of `f`,
//! tends to `f` as `r` grows and to `0` as `r` shrinks. The max-norm and the
//! l1-norm have four-branch closed forms; other gauges go through the
//! brute-force oracle.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::{envelope_oracle_2d, pasch_hausdorff_oracle, OracleSettings};
use crate::prox::ProxConfig;

pub type Point = (f64, f64);

/// Evaluator behind [`Gauge2D::Custom`].
pub type GaugeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A gauge checked by sampling for nonnegativity, `k(0) = 0`, positive
/// homogeneity and midpoint convexity.
#[derive(Clone)]
pub struct CustomGauge {
    name: String,
    eval: GaugeFn,
}

impl CustomGauge {
    pub fn new(name: impl Into<String>, eval: GaugeFn) -> Result<Self> {
        let name = name.into();
        let bad = |what: String| Err(Error::BadParam(format!("gauge {name}: {what}")));
        let at_origin = eval(0.0, 0.0);
        if at_origin.abs() > 1e-12 {
            return bad(format!("value {at_origin} at the origin"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut sample = || (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        for _ in 0..100 {
            let (x, y) = sample();
            let v = eval(x, y);
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("value {v} at ({x}, {y})"));
            }
            for alpha in [0.5, 2.0] {
                let scaled = eval(alpha * x, alpha * y);
                if (scaled - alpha * v).abs() > 1e-9 * (alpha * v).abs().max(1e-300) + 1e-15 {
                    return bad(format!("not positively homogeneous at ({x}, {y})"));
                }
            }
            let (u, w) = sample();
            let mid = eval(0.5 * (x + u), 0.5 * (y + w));
            let chord = 0.5 * (v + eval(u, w));
            if mid > chord + 1e-9 * (1.0 + chord.abs()) {
                return bad(format!("not convex between ({x}, {y}) and ({u}, {w})"));
            }
        }
        Ok(Self { name, eval })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }
}

impl fmt::Debug for CustomGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomGauge").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone)]
pub enum Gauge2D {
    MaxNorm,
    L1Norm,
    /// `s * |p|_2`
    ScaledEuclidean(f64),
    Custom(CustomGauge),
}

impl Gauge2D {
    pub fn scaled_euclidean(scale: f64) -> Result<Self> {
        if scale.is_finite() && scale > 0.0 {
            Ok(Self::ScaledEuclidean(scale))
        } else {
            Err(Error::BadParam(format!("Euclidean scale must be > 0, got {scale}")))
        }
    }

    pub fn custom<F>(name: &str, eval: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        CustomGauge::new(name, Arc::new(eval)).map(Self::Custom)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Self::MaxNorm => x.abs().max(y.abs()),
            Self::L1Norm => x.abs() + y.abs(),
            Self::ScaledEuclidean(s) => s * x.hypot(y),
            Self::Custom(g) => g.eval(x, y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionLabel {
    R1,
    R2,
    R3,
    R4,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 4] = [Self::R1, Self::R2, Self::R3, Self::R4];
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::R1 => "R1",
            Self::R2 => "R2",
            Self::R3 => "R3",
            Self::R4 => "R4",
        };
        f.write_str(s)
    }
}

/// Region of the max-norm partition containing `p`:
/// R1 `|y| <= k|x|`, R2 `|x| <= k|y|`, R3 the remaining same-sign wedges,
/// R4 the remaining opposite-sign wedges, with `k = r/(r+2)`. Ties go to the
/// lower label.
pub fn classify_max(r: f64, p: Point) -> RegionLabel {
    let (x, y) = p;
    let k = r / (r + 2.0);
    if y.abs() <= k * x.abs() {
        RegionLabel::R1
    } else if x.abs() <= k * y.abs() {
        RegionLabel::R2
    } else if x * y >= 0.0 {
        RegionLabel::R3
    } else {
        RegionLabel::R4
    }
}

/// Closed-form `(g_r, prox)` of the squared max-norm on one branch,
/// regardless of whether `p` lies in that branch's region.
pub fn max_branch(label: RegionLabel, r: f64, p: Point) -> (f64, Point) {
    let (x, y) = p;
    match label {
        RegionLabel::R1 => (r * x * x / (r + 2.0), (r * x / (r + 2.0), y)),
        RegionLabel::R2 => (r * y * y / (r + 2.0), (x, r * y / (r + 2.0))),
        RegionLabel::R3 => {
            let t = r * (x + y) / (2.0 * (r + 1.0));
            let g = (r * r * (x - y).powi(2) + 2.0 * r * (x * x + y * y)) / (4.0 * (r + 1.0));
            (g, (t, t))
        }
        RegionLabel::R4 => {
            let t = r * (x - y) / (2.0 * (r + 1.0));
            let g = (r * r * (x + y).powi(2) + 2.0 * r * (x * x + y * y)) / (4.0 * (r + 1.0));
            (g, (t, -t))
        }
    }
}

/// Closed-form `(g_r, prox)` of the squared l1-norm on one branch: R1 the
/// same-sign quadrants, R2 the opposite-sign quadrants, R3 the x-axis,
/// R4 the y-axis (the set where the proximal point lies).
pub fn l1_branch(label: RegionLabel, r: f64, p: Point) -> (f64, Point) {
    let (x, y) = p;
    match label {
        RegionLabel::R1 => (
            r * (x + y).powi(2) / (r + 4.0),
            (((r + 2.0) * x - 2.0 * y) / (r + 4.0), (-2.0 * x + (r + 2.0) * y) / (r + 4.0)),
        ),
        RegionLabel::R2 => (
            r * (x - y).powi(2) / (r + 4.0),
            (((r + 2.0) * x + 2.0 * y) / (r + 4.0), (2.0 * x + (r + 2.0) * y) / (r + 4.0)),
        ),
        RegionLabel::R3 => (
            (2.0 * r * x * x + r * (r + 2.0) * y * y) / (2.0 * (r + 2.0)),
            (r * x / (r + 2.0), 0.0),
        ),
        RegionLabel::R4 => (
            (r * (r + 2.0) * x * x + 2.0 * r * y * y) / (2.0 * (r + 2.0)),
            (0.0, r * y / (r + 2.0)),
        ),
    }
}

/// Region of the l1 partition containing `p`: the branch whose proximal
/// point attains the smallest true objective `(|u|+|v|)^2 + (r/2)|q - p|^2`.
/// The true proximal point is always one of the four branch candidates.
pub fn classify_l1(r: f64, p: Point) -> RegionLabel {
    let objective = |q: Point| {
        (q.0.abs() + q.1.abs()).powi(2) + 0.5 * r * ((q.0 - p.0).powi(2) + (q.1 - p.1).powi(2))
    };
    let values = RegionLabel::ALL.map(|label| objective(l1_branch(label, r, p).1));
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = 1e-12 * (1.0 + best.abs());
    let idx = values
        .iter()
        .position(|&v| v <= best + slack)
        .expect("one candidate is minimal");
    RegionLabel::ALL[idx]
}

/// `h_r` and the proximal point of the squared max-norm at `p` (`r > 0`).
pub fn smooth_max(r: f64, p: Point) -> (f64, Point) {
    let (g, prox) = max_branch(classify_max(r, p), r, p);
    (g.max(0.0).sqrt(), prox)
}

/// `h_r` and the proximal point of the squared l1-norm at `p` (`r > 0`).
pub fn smooth_l1(r: f64, p: Point) -> (f64, Point) {
    let (g, prox) = l1_branch(classify_l1(r, p), r, p);
    (g.max(0.0).sqrt(), prox)
}

/// `h_r` of an arbitrary gauge through the two-dimensional oracle.
pub fn smooth_custom(g: &Gauge2D, r: f64, p: Point, s: &OracleSettings) -> Result<f64> {
    let cfg = ProxConfig::new(r)?;
    let m = envelope_oracle_2d(|u, v| g.eval(u, v).powi(2), cfg, p, s)?;
    Ok(m.value.max(0.0).sqrt())
}

/// Pasch-Hausdorff envelope `min_y g(y) + r|y - p|_2`.
pub fn pasch_hausdorff(g: &Gauge2D, r: f64, p: Point, s: &OracleSettings) -> Result<f64> {
    Ok(pasch_hausdorff_oracle(|u, v| g.eval(u, v), r, p, s)?.value)
}

/// Evaluation of a smoothed gauge at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothPoint {
    pub h: f64,
    /// Proximal point of `f^2` at `p`.
    pub prox: Point,
    /// Closed-form branch, for the max-norm and l1-norm.
    pub region: Option<RegionLabel>,
}

/// Gradient of `h_r`, undefined on the kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaugeGradient {
    Kernel,
    Gradient(f64, f64),
}

/// `h_r = sqrt(e_r(f^2))` for a fixed base gauge and `r`.
#[derive(Debug, Clone)]
pub struct SmoothedGauge {
    base: Gauge2D,
    r: f64,
    oracle: OracleSettings,
}

impl SmoothedGauge {
    pub fn new(base: Gauge2D, r: f64) -> Result<Self> {
        ProxConfig::new(r)?;
        Ok(Self {
            base,
            r,
            oracle: OracleSettings::default(),
        })
    }

    pub fn with_oracle(mut self, oracle: OracleSettings) -> Self {
        self.oracle = oracle;
        self
    }

    pub fn base(&self) -> &Gauge2D {
        &self.base
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn evaluate(&self, p: Point) -> Result<SmoothPoint> {
        let r = self.r;
        Ok(match &self.base {
            Gauge2D::MaxNorm => {
                let region = classify_max(r, p);
                let (g, prox) = max_branch(region, r, p);
                SmoothPoint { h: g.max(0.0).sqrt(), prox, region: Some(region) }
            }
            Gauge2D::L1Norm => {
                let region = classify_l1(r, p);
                let (g, prox) = l1_branch(region, r, p);
                SmoothPoint { h: g.max(0.0).sqrt(), prox, region: Some(region) }
            }
            Gauge2D::ScaledEuclidean(s) => {
                let shrink = r / (r + 2.0 * s * s);
                SmoothPoint {
                    h: s * p.0.hypot(p.1) * shrink.sqrt(),
                    prox: (shrink * p.0, shrink * p.1),
                    region: None,
                }
            }
            Gauge2D::Custom(g) => {
                let cfg = ProxConfig::new(r)?;
                let m = envelope_oracle_2d(|u, v| g.eval(u, v).powi(2), cfg, p, &self.oracle)?;
                SmoothPoint { h: m.value.max(0.0).sqrt(), prox: m.argmin, region: None }
            }
        })
    }

    pub fn value(&self, p: Point) -> Result<f64> {
        Ok(self.evaluate(p)?.h)
    }

    /// `grad h_r = r (p - prox) / (2 h_r)`.
    pub fn gradient(&self, p: Point) -> Result<GaugeGradient> {
        let e = self.evaluate(p)?;
        if !(e.h > 0.0) {
            return Ok(GaugeGradient::Kernel);
        }
        let k = self.r / (2.0 * e.h);
        Ok(GaugeGradient::Gradient(k * (p.0 - e.prox.0), k * (p.1 - e.prox.1)))
    }

    /// Level set `h_r = 1` sampled at `samples` equally spaced angles.
    pub fn unit_circle(&self, samples: usize) -> Result<Vec<Point>> {
        unit_circle(self, samples)
    }
}

/// Points `t (cos θ, sin θ)` with `h_r = 1` at `samples` equally spaced angles
/// starting from `θ = 0`; homogeneity gives `t = 1 / h_r(cos θ, sin θ)`.
pub fn unit_circle(sg: &SmoothedGauge, samples: usize) -> Result<Vec<Point>> {
    if samples < 8 {
        return Err(Error::BadParam(format!("need at least 8 samples, got {samples}")));
    }
    (0..samples)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / samples as f64;
            let (sin, cos) = theta.sin_cos();
            let h = sg.value((cos, sin))?;
            if !(h > 1e-9) || !h.is_finite() {
                return Err(Error::DegenerateRay(theta));
            }
            Ok((cos / h, sin / h))
        })
        .collect()
}
