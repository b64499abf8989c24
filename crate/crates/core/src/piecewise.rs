//! Convex piecewise-cubic functions on the real line.
//!
//! A function is stored as `m` full-domain cubics together with `m - 1`
//! strictly increasing breakpoints and an optional pair of domain bounds.
//! Piece `i` is active on the closed subdomain between its neighbouring
//! breakpoints (or the domain bounds at the ends), so a breakpoint belongs to
//! both adjacent pieces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the value match of adjacent pieces at a breakpoint.
pub const CONTINUITY_TOL: f64 = 1e-9;
/// Absolute slack allowed on second derivatives and slope jumps.
pub const CONVEXITY_TOL: f64 = 1e-12;

/// One cubic `a x^3 + b x^2 + c x + d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicPiece {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl CubicPiece {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn affine(slope: f64, intercept: f64) -> Self {
        Self::new(0.0, 0.0, slope, intercept)
    }

    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        ((self.a * x + self.b) * x + self.c) * x + self.d
    }

    #[inline]
    pub fn slope(&self, x: f64) -> f64 {
        (3.0 * self.a * x + 2.0 * self.b) * x + self.c
    }

    #[inline]
    pub fn curvature(&self, x: f64) -> f64 {
        6.0 * self.a * x + 2.0 * self.b
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    /// Reflection `x -> -x`: the returned piece evaluates to `self.value(-x)`.
    pub fn mirrored(&self) -> Self {
        Self::new(-self.a, self.b, -self.c, self.d)
    }
}

/// Closed interval of slopes supporting a convex function at a point.
///
/// At a finite domain bound one end is infinite: the normal cone of the
/// domain adds the ray `(-inf, f'(lo)]` at the lower bound and
/// `[f'(hi), +inf)` at the upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubgradientInterval {
    pub lo: f64,
    pub hi: f64,
}

impl SubgradientInterval {
    pub fn singleton(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "subgradient interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// The interval shifted by `delta`.
    pub fn shift(&self, delta: f64) -> Self {
        Self {
            lo: self.lo + delta,
            hi: self.hi + delta,
        }
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }
}

/// A validated convex piecewise-cubic function.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCubic {
    pieces: Vec<CubicPiece>,
    breakpoints: Vec<f64>,
    lo: f64,
    hi: f64,
}

/// Validate the pieces, breakpoints and optional bounds of a convex
/// piecewise cubic. Infinite bounds mean the domain is unbounded on that side.
pub fn validate(
    pieces: Vec<CubicPiece>,
    breakpoints: Vec<f64>,
    bounds: Option<(f64, f64)>,
) -> Result<PiecewiseCubic> {
    PiecewiseCubic::new(pieces, breakpoints, bounds)
}

impl PiecewiseCubic {
    pub fn new(
        pieces: Vec<CubicPiece>,
        breakpoints: Vec<f64>,
        bounds: Option<(f64, f64)>,
    ) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::NoPieces);
        }
        if breakpoints.len() + 1 != pieces.len() {
            return Err(Error::LengthMismatch {
                pieces: pieces.len(),
                expected: pieces.len() - 1,
                got: breakpoints.len(),
            });
        }
        if let Some(i) = pieces.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite(i + 1));
        }
        if breakpoints.iter().any(|x| !x.is_finite())
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::BadBreakpoints);
        }
        let (lo, hi) = bounds.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
        if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::BadBounds);
        }
        if lo >= hi {
            return Err(Error::EmptyDomain { lo, hi });
        }
        if let (Some(&first), Some(&last)) = (breakpoints.first(), breakpoints.last()) {
            if lo >= first || hi <= last {
                return Err(Error::BadBounds);
            }
        }

        let f = Self {
            pieces,
            breakpoints,
            lo,
            hi,
        };
        for i in 0..f.pieces.len() {
            f.check_piece_convexity(i)?;
        }
        for (k, &x) in f.breakpoints.iter().enumerate() {
            let (left, right) = (f.pieces[k], f.pieces[k + 1]);
            let (fl, fr) = (left.value(x), right.value(x));
            let scale = 1f64.max(fl.abs()).max(fr.abs());
            if (fl - fr).abs() > CONTINUITY_TOL * scale {
                return Err(Error::NotContinuous {
                    index: k + 1,
                    x,
                    left: fl,
                    right: fr,
                });
            }
            let (sl, sr) = (left.slope(x), right.slope(x));
            if sl > sr + CONVEXITY_TOL {
                return Err(Error::SlopeDecrease {
                    index: k + 1,
                    x,
                    left: sl,
                    right: sr,
                });
            }
        }
        Ok(f)
    }

    /// A single convex cubic on the whole line (or on `bounds`).
    pub fn single(piece: CubicPiece, bounds: Option<(f64, f64)>) -> Result<Self> {
        Self::new(vec![piece], Vec::new(), bounds)
    }

    // The second derivative is affine, so it is minimised at an endpoint of
    // the subdomain; an infinite endpoint constrains the sign of `a`.
    fn check_piece_convexity(&self, i: usize) -> Result<()> {
        let p = &self.pieces[i];
        let (l, u) = self.piece_domain(i);
        let fail = |x: f64, curvature: f64| Error::NotConvexPiece {
            index: i + 1,
            x,
            curvature,
        };
        if l == f64::NEG_INFINITY && p.a > 0.0 {
            return Err(fail(l, f64::NEG_INFINITY));
        }
        if u == f64::INFINITY && p.a < 0.0 {
            return Err(fail(u, f64::NEG_INFINITY));
        }
        for x in [l, u] {
            let k = if x.is_finite() {
                p.curvature(x)
            } else {
                // a == 0 on this side, curvature is constant
                2.0 * p.b + if p.a == 0.0 { 0.0 } else { f64::INFINITY }
            };
            if k < -CONVEXITY_TOL {
                return Err(fail(x, k));
            }
        }
        Ok(())
    }

    pub fn pieces(&self) -> &[CubicPiece] {
        &self.pieces
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    /// Domain bounds; infinite on unbounded sides.
    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() || self.hi.is_finite()
    }

    /// Closed subdomain of piece `i`.
    pub fn piece_domain(&self, i: usize) -> (f64, f64) {
        let l = if i == 0 {
            self.lo
        } else {
            self.breakpoints[i - 1]
        };
        let u = self.breakpoints.get(i).copied().unwrap_or(self.hi);
        (l, u)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Index of the piece active at `x`; at a breakpoint the left piece.
    pub fn locate(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&b| b < x)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::OutOfDomain(x));
        }
        Ok(self.pieces[self.locate(x)].value(x))
    }

    /// Value with the convex-analysis convention `+inf` outside the domain.
    pub fn extended_value(&self, x: f64) -> f64 {
        self.eval(x).unwrap_or(f64::INFINITY)
    }

    pub fn subgradient(&self, x: f64) -> Result<SubgradientInterval> {
        if !self.contains(x) {
            return Err(Error::OutOfDomain(x));
        }
        let i = self.locate(x);
        let s = self.pieces[i].slope(x);
        if x == self.lo {
            return Ok(SubgradientInterval::new(f64::NEG_INFINITY, s));
        }
        if x == self.hi {
            return Ok(SubgradientInterval::new(s, f64::INFINITY));
        }
        if self.breakpoints.get(i) == Some(&x) {
            let right = self.pieces[i + 1].slope(x);
            return Ok(SubgradientInterval::new(s.min(right), right.max(s)));
        }
        Ok(SubgradientInterval::singleton(s))
    }

    /// True when every piece is affine and the domain is the whole line.
    pub fn is_affine(&self) -> bool {
        !self.is_bounded()
            && self.pieces.len() == 1
            && self.pieces[0].a == 0.0
            && self.pieces[0].b == 0.0
    }

    /// Largest absolute slope when every piece is affine; `None` otherwise.
    pub fn lipschitz_constant(&self) -> Option<f64> {
        if self.pieces.iter().any(|p| p.a != 0.0 || p.b != 0.0) {
            return None;
        }
        Some(self.pieces.iter().map(|p| p.c.abs()).fold(0.0, f64::max))
    }

    /// Reflection `x -> -x` of the whole function.
    pub fn mirrored(&self) -> Self {
        Self {
            pieces: self.pieces.iter().rev().map(CubicPiece::mirrored).collect(),
            breakpoints: self.breakpoints.iter().rev().map(|x| -x).collect(),
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub(crate) fn from_parts_unchecked(
        pieces: Vec<CubicPiece>,
        breakpoints: Vec<f64>,
        lo: f64,
        hi: f64,
    ) -> Self {
        Self {
            pieces,
            breakpoints,
            lo,
            hi,
        }
    }
}
