//! Random convex piecewise cubics for randomized checks, and the range of
//! prox-centres worth sampling for a given partition.

use rand::Rng;

use crate::piecewise::{CubicPiece, PiecewiseCubic};
use crate::prox::{restrict, EnvelopePartition};

const COEF: f64 = 5.0;
const MAX_ATTEMPTS: usize = 10_000;

/// Knobs for [`random_convex`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator {
    pub max_pieces: usize,
    /// Probability that a join is made differentiable.
    pub smooth_join: f64,
    /// Probability that the result is restricted to a random finite interval.
    pub bounded: f64,
    /// Restrict to piecewise-linear functions (`a = b = 0`).
    pub linear: bool,
}

impl Default for Generator {
    fn default() -> Self {
        Self {
            max_pieces: 6,
            smooth_join: 0.3,
            bounded: 0.2,
            linear: false,
        }
    }
}

/// A random convex piecewise cubic with at most `g.max_pieces` pieces.
///
/// Breakpoints are drawn in `[-5, 5]`. Each piece draws `a, b, c` in
/// `[-5, 5]` and is rejected until it is convex on its subdomain and its
/// slope at the left breakpoint is at least the previous piece's; `d` is then
/// fixed by continuity.
pub fn random_convex<R: Rng + ?Sized>(rng: &mut R, g: &Generator) -> PiecewiseCubic {
    loop {
        if let Some(f) = try_random_convex(rng, g) {
            return f;
        }
    }
}

fn try_random_convex<R: Rng + ?Sized>(rng: &mut R, g: &Generator) -> Option<PiecewiseCubic> {
    let m = rng.gen_range(1..=g.max_pieces.max(1));
    let mut breakpoints: Vec<f64> = (0..m - 1).map(|_| rng.gen_range(-COEF..COEF)).collect();
    breakpoints.sort_by(f64::total_cmp);
    if breakpoints.windows(2).any(|w| w[1] - w[0] < 1e-3) {
        return None;
    }

    let mut pieces: Vec<CubicPiece> = Vec::with_capacity(m);
    for i in 0..m {
        let left = (i > 0).then(|| breakpoints[i - 1]);
        let right = breakpoints.get(i).copied();
        let prev = pieces.last().copied();
        let smooth = prev.is_some() && rng.gen_bool(g.smooth_join);
        let piece = (0..MAX_ATTEMPTS).find_map(|_| {
            let (a, b) = if g.linear {
                (0.0, 0.0)
            } else if left.is_none() && right.is_none() {
                (0.0, rng.gen_range(0.0..COEF))
            } else {
                (rng.gen_range(-COEF..COEF), rng.gen_range(-COEF..COEF))
            };
            let mut c = rng.gen_range(-COEF..COEF);
            if let (Some(x), Some(p), true) = (left, prev, smooth) {
                c = p.slope(x) - 3.0 * a * x * x - 2.0 * b * x;
            }
            let q = CubicPiece::new(a, b, c, 0.0);
            let convex = match (left, right) {
                (None, None) => a == 0.0 && b >= 0.0,
                (None, Some(u)) => a <= 0.0 && q.curvature(u) >= 0.0,
                (Some(l), None) => a >= 0.0 && q.curvature(l) >= 0.0,
                (Some(l), Some(u)) => q.curvature(l) >= 0.0 && q.curvature(u) >= 0.0,
            };
            let monotone = match (left, prev) {
                (Some(x), Some(p)) => smooth || q.slope(x) >= p.slope(x),
                _ => true,
            };
            (convex && monotone).then_some(q)
        });
        let mut q = piece?;
        q.d = match (left, prev) {
            (Some(x), Some(p)) => p.value(x) - (q.value(x) - q.d),
            _ => rng.gen_range(-COEF..COEF),
        };
        pieces.push(q);
    }

    let f = PiecewiseCubic::new(pieces, breakpoints, None).ok()?;
    if rng.gen_bool(g.bounded) {
        let lo = rng.gen_range(-2.0 * COEF..COEF);
        let hi = rng.gen_range(lo + 0.1..2.0 * COEF);
        restrict(&f, lo, hi).ok()
    } else {
        Some(f)
    }
}

/// A random affine function `c x + d` with `c, d` in `[-5, 5]`.
pub fn random_affine<R: Rng + ?Sized>(rng: &mut R) -> PiecewiseCubic {
    let piece = CubicPiece::affine(rng.gen_range(-COEF..COEF), rng.gen_range(-COEF..COEF));
    PiecewiseCubic::single(piece, None).expect("affine functions are convex")
}

/// Prox-centres worth sampling: the partition boundaries widened by three
/// times their span (at least 1) on each side, or `[-3, 3]` when the
/// envelope has a single cell.
pub fn centre_range(partition: &EnvelopePartition) -> (f64, f64) {
    let b = partition.boundaries();
    match (b.first(), b.last()) {
        (Some(&lo), Some(&hi)) => {
            let w = (hi - lo).max(1.0);
            (lo - 3.0 * w, hi + 3.0 * w)
        }
        _ => (-3.0, 3.0),
    }
}
