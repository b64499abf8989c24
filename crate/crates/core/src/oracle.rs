//! Brute-force proximal points and envelopes used to cross-check the closed
//! forms. Nothing here calls into [`crate::prox`] or [`crate::gauge`].

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseCubic;
use crate::prox::ProxConfig;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const MAX_BRACKET: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    /// Width at which a bracket is considered converged.
    pub tol: f64,
    /// Iteration cap per bisection or line search.
    pub max_iter: usize,
    pub bracket_growth: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 200,
            bracket_growth: 2.0,
        }
    }
}

impl OracleSettings {
    pub fn new(tol: f64, max_iter: usize, bracket_growth: f64) -> Result<Self> {
        if !(tol > 0.0) || max_iter == 0 || !(bracket_growth > 1.0) {
            return Err(Error::BadParam(format!(
                "oracle settings need tol > 0, max_iter >= 1, growth > 1 (got {tol}, {max_iter}, {bracket_growth})"
            )));
        }
        Ok(Self {
            tol,
            max_iter,
            bracket_growth,
        })
    }

    /// Bisect down to adjacent floating-point numbers.
    pub fn exhaustive() -> Self {
        Self {
            tol: f64::MIN_POSITIVE,
            max_iter: 2200,
            bracket_growth: 2.0,
        }
    }
}

/// Position of zero relative to the interval `∂f(y) + r(y - x)`.
fn inclusion_sign(f: &PiecewiseCubic, r: f64, x: f64, y: f64) -> Result<i8> {
    let g = f.subgradient(y)?.shift(r * (y - x));
    Ok(if g.hi < 0.0 {
        -1
    } else if g.lo > 0.0 {
        1
    } else {
        0
    })
}

/// Proximal point and envelope value by bisection on the optimality
/// inclusion `0 ∈ ∂f(y) + r(y - x)`, whose left side is strictly monotone.
pub fn prox_oracle_1d(
    f: &PiecewiseCubic,
    cfg: ProxConfig,
    x: f64,
    s: &OracleSettings,
) -> Result<(f64, f64)> {
    let r = cfg.r();
    let (dom_lo, dom_hi) = f.bounds();
    let objective = |y: f64| -> Result<(f64, f64)> { Ok((y, f.eval(y)? + r / 2.0 * (y - x) * (y - x))) };

    let mut width = 1.0;
    let mut lo = (x - width).clamp(dom_lo, dom_hi);
    loop {
        match inclusion_sign(f, r, x, lo)? {
            0 => return objective(lo),
            -1 => break,
            _ => {}
        }
        width *= s.bracket_growth;
        if width > MAX_BRACKET {
            return Err(Error::NoBracket);
        }
        lo = (x - width).clamp(dom_lo, dom_hi);
    }
    width = 1.0;
    let mut hi = (x + width).clamp(dom_lo, dom_hi);
    loop {
        match inclusion_sign(f, r, x, hi)? {
            0 => return objective(hi),
            1 => break,
            _ => {}
        }
        width *= s.bracket_growth;
        if width > MAX_BRACKET {
            return Err(Error::NoBracket);
        }
        hi = (x + width).clamp(dom_lo, dom_hi);
    }

    for _ in 0..s.max_iter {
        let mid = lo + 0.5 * (hi - lo);
        if hi - lo <= s.tol || mid <= lo || mid >= hi {
            return objective(mid);
        }
        match inclusion_sign(f, r, x, mid)? {
            0 => return objective(mid),
            -1 => lo = mid,
            _ => hi = mid,
        }
    }
    Err(Error::MaxIterExceeded(s.max_iter))
}

/// Minimiser and minimum of a convex function on `[lo, hi]` by golden-section
/// search. Returns the best point seen.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, f64)> {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while hi - lo > tol {
        if iter == max_iter {
            return Err(Error::MaxIterExceeded(max_iter));
        }
        iter += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        }
        if x1 >= x2 {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    let best = [(x1, f1), (x2, f2), (mid, fm)]
        .into_iter()
        .fold((mid, fm), |acc, p| if p.1 < acc.1 { p } else { acc });
    Ok(best)
}

/// Result of a two-dimensional brute-force minimisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum2d {
    pub value: f64,
    pub argmin: (f64, f64),
}

/// Minimise a convex `objective` over a box around `centre` by nested exact
/// line minimisation: the outer search runs over the first coordinate of
/// `u -> min_v objective(u, v)`, which is convex again. Unlike coordinate
/// descent this cannot stall on a ridge of nondifferentiability.
///
/// `radius` bounds the distance of a minimiser from `centre` on the first
/// axis; `inner_radius(u)` does the same for the second axis at fixed `u`.
fn nested_minimise<F, R>(
    objective: F,
    centre: (f64, f64),
    radius: f64,
    inner_radius: R,
    s: &OracleSettings,
) -> Result<Minimum2d>
where
    F: Fn(f64, f64) -> f64,
    R: Fn(f64) -> f64,
{
    if !(radius > 0.0) {
        return Ok(Minimum2d {
            value: objective(centre.0, centre.1),
            argmin: centre,
        });
    }
    let inner_tol = s.tol / 10.0;
    let mut failure = None;
    let mut line = |u: f64| -> (f64, f64) {
        let rv = inner_radius(u);
        if !(rv > 0.0) {
            return (centre.1, objective(u, centre.1));
        }
        match golden_section(|v| objective(u, v), centre.1 - rv, centre.1 + rv, inner_tol, s.max_iter) {
            Ok(best) => best,
            Err(e) => {
                failure = Some(e);
                (centre.1, f64::INFINITY)
            }
        }
    };
    let (u, _) = golden_section(|u| line(u).1, centre.0 - radius, centre.0 + radius, s.tol, s.max_iter)?;
    let (v, value) = line(u);
    if let Some(e) = failure {
        return Err(e);
    }
    // the box centre is always a candidate
    let at_centre = objective(centre.0, centre.1);
    if at_centre <= value {
        return Ok(Minimum2d {
            value: at_centre,
            argmin: centre,
        });
    }
    Ok(Minimum2d { value, argmin: (u, v) })
}

/// `min_y f2(y) + (r/2)|y - point|^2` for a convex, nonnegative, finite `f2`.
pub fn envelope_oracle_2d<F>(
    f2: F,
    cfg: ProxConfig,
    point: (f64, f64),
    s: &OracleSettings,
) -> Result<Minimum2d>
where
    F: Fn(f64, f64) -> f64,
{
    let r = cfg.r();
    let (px, py) = point;
    let objective = |u: f64, v: f64| f2(u, v) + 0.5 * r * ((u - px).powi(2) + (v - py).powi(2));
    // objective >= (r/2)|y - point|^2 and its minimum is at most f2(point)
    let radius = (2.0 * f2(px, py) / r).sqrt();
    let inner = |u: f64| (2.0 * f2(u, py) / r).sqrt();
    nested_minimise(objective, point, radius, inner, s)
}

/// Pasch-Hausdorff envelope `min_y f(y) + r|y - point|` of a nonnegative
/// convex `f`.
pub fn pasch_hausdorff_oracle<F>(f: F, r: f64, point: (f64, f64), s: &OracleSettings) -> Result<Minimum2d>
where
    F: Fn(f64, f64) -> f64,
{
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::BadParam(format!("r must be > 0, got {r}")));
    }
    let (px, py) = point;
    let objective = |u: f64, v: f64| f(u, v) + r * (u - px).hypot(v - py);
    let radius = f(px, py) / r;
    let inner = |u: f64| (f(u, py) + r * (u - px).abs()) / r;
    nested_minimise(objective, point, radius, inner, s)
}
