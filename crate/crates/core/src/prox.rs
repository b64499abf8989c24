//! Closed-form proximal points and Moreau envelopes of convex piecewise cubics.
//!
//! For `r > 0` the envelope `e_r f(x) = min_y f(y) + (r/2)(y - x)^2` of a
//! convex piecewise cubic splits the prox-centre axis into cells. Each piece
//! `f_i` with subdomain `[l, u]` owns the cell between `l + f_i'(l)/r` and
//! `u + f_i'(u)/r`, where the proximal point is the root of
//! `3a y^2 + (2b + r) y + (c - r x) = 0` lying in `[l, u]`. Between two piece
//! cells sits a closed breakpoint cell whose width is the slope jump divided
//! by `r`; there the proximal point is pinned to the breakpoint. A finite
//! domain bound contributes a closed, unbounded cell whose proximal point is
//! the bound itself.

use std::fmt;

use crate::error::{Error, Result};
use crate::fmt::significant;
use crate::piecewise::{CubicPiece, PiecewiseCubic};

/// Prox-parameter `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxConfig {
    r: f64,
}

impl ProxConfig {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 {
            Ok(Self { r })
        } else {
            Err(Error::BadParam(format!("prox-parameter r must be finite and > 0, got {r}")))
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Which side of the domain a bound cell clamps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellKind {
    /// Proximal point given by the root formula of piece `i` (0-based).
    Piece(usize),
    /// Proximal point pinned to breakpoint `x_index` (1-based).
    Breakpoint { index: usize, x: f64 },
    /// Proximal point clamped to a finite domain bound.
    Bound { side: Side, x: f64 },
}

/// One cell of the prox-centre axis. Piece cells are open, breakpoint and
/// bound cells are closed; a shared endpoint belongs to the closed cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub lo: f64,
    pub hi: f64,
    pub kind: CellKind,
}

impl Cell {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn is_closed(&self) -> bool {
        !matches!(self.kind, CellKind::Piece(_))
    }
}

/// Ordered cells tiling the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopePartition {
    r: f64,
    cells: Vec<Cell>,
}

impl EnvelopePartition {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Interior cell boundaries, left to right.
    pub fn boundaries(&self) -> Vec<f64> {
        self.cells[..self.cells.len() - 1]
            .iter()
            .map(|c| c.hi)
            .collect()
    }

    /// Index of the cell containing `x`.
    pub fn locate(&self, x: f64) -> usize {
        let last = self.cells.len() - 1;
        let k = self.cells.partition_point(|c| c.hi < x).min(last);
        let cell = &self.cells[k];
        if x == cell.hi && !cell.is_closed() && k < last {
            k + 1
        } else {
            k
        }
    }

    /// One line per cell: `interval kind index formula`.
    pub fn render(&self, f: &PiecewiseCubic) -> String {
        let mut out = String::new();
        for cell in &self.cells {
            out.push_str(&render_cell(cell, f, self.r));
            out.push('\n');
        }
        out
    }
}

fn render_cell(cell: &Cell, f: &PiecewiseCubic, r: f64) -> String {
    let num = |v: f64| significant(v, 12);
    let open = if cell.is_closed() && cell.lo.is_finite() { '[' } else { '(' };
    let close = if cell.is_closed() && cell.hi.is_finite() { ']' } else { ')' };
    let interval = format!("{open}{},{}{close}", num(cell.lo), num(cell.hi));
    let pinned = |x: f64, value: f64| {
        format!(
            "prox={} envelope={}+{}*(x{})^2",
            num(x),
            num(value),
            num(r / 2.0),
            signed(-x)
        )
    };
    match cell.kind {
        CellKind::Piece(i) => {
            let p = f.pieces()[i];
            let prox = if is_quadratic(&p) {
                let denom = 2.0 * p.b + r;
                format!("prox={}*x{}", num(r / denom), signed(-p.c / denom))
            } else {
                let big_b = 2.0 * p.b + r;
                format!(
                    "prox=({}+sqrt({}{}*x))/{}",
                    num(-big_b),
                    num(big_b * big_b - 12.0 * p.a * p.c),
                    signed(12.0 * p.a * r),
                    num(6.0 * p.a)
                )
            };
            format!("{interval} piece {i} {prox} envelope=f_{i}(prox)+{}*(prox-x)^2", num(r / 2.0))
        }
        CellKind::Breakpoint { index, x } => {
            format!("{interval} breakpoint {index} {}", pinned(x, f.pieces()[index - 1].value(x)))
        }
        CellKind::Bound { side, x } => {
            let label = match side {
                Side::Lower => "lo",
                Side::Upper => "hi",
            };
            let value = f.eval(x).expect("bound lies in the domain");
            format!("{interval} bound {label} {}", pinned(x, value))
        }
    }
}

fn signed(v: f64) -> String {
    let s = significant(v, 12);
    if s.starts_with('-') {
        s
    } else {
        format!("+{s}")
    }
}

/// Proximal point, envelope value and envelope gradient at one prox-centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxResult {
    pub prox: f64,
    pub envelope: f64,
    pub gradient: f64,
    /// Index into the cells of the [`EnvelopePartition`].
    pub cell: usize,
}

impl fmt::Display for ProxResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "prox={} envelope={} gradient={} cell={}",
            significant(self.prox, 12),
            significant(self.envelope, 12),
            significant(self.gradient, 12),
            self.cell
        )
    }
}

fn is_quadratic(p: &CubicPiece) -> bool {
    p.a.abs() <= 1e-14 * 1f64.max(p.b.abs()).max(p.c.abs())
}

/// Root of `3a y^2 + (2b + r) y + (c - r x)` on the convex branch, i.e. the
/// `+sqrt` root `(-(2b + r) + sqrt(D)) / (6a)`.
///
/// Evaluated in the cancellation-free form `-2C / (B + sqrt D)` when
/// `B = 2b + r >= 0`; this also covers `a = 0`. With `strict` unset, a
/// negative discriminant is clamped to zero.
fn stationary_point(p: &CubicPiece, r: f64, x: f64, strict: bool) -> Result<f64> {
    let big_b = 2.0 * p.b + r;
    let big_c = p.c - r * x;
    if is_quadratic(p) {
        return Ok(-big_c / big_b);
    }
    let cross = 12.0 * p.a * big_c;
    let mut disc = big_b * big_b - cross;
    if disc < 0.0 {
        let scale = 1f64.max(big_b * big_b).max(cross.abs());
        if strict && disc < -1e-10 * scale {
            return Err(Error::NegativeDiscriminant(disc));
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    let denom = big_b + root;
    if big_b >= 0.0 && denom > 0.0 {
        Ok(-2.0 * big_c / denom)
    } else {
        Ok((root - big_b) / (6.0 * p.a))
    }
}

/// Proximal point of a single full-domain cubic on the convex branch.
pub fn prox_piece_candidate(piece: &CubicPiece, cfg: ProxConfig, x: f64) -> Result<f64> {
    stationary_point(piece, cfg.r(), x, true)
}

/// Closed form for `f(x) = a|x|^3 + b x^2 + c x + d` with `a, b >= 0`.
///
/// The returned `cell` is 0 on the branch `x < c/r` and 1 otherwise.
pub fn prox_symmetric_cubic(a: f64, b: f64, c: f64, d: f64, cfg: ProxConfig, x: f64) -> Result<ProxResult> {
    if !(a >= 0.0 && b >= 0.0) || ![a, b, c, d, x].iter().all(|v| v.is_finite()) {
        return Err(Error::BadParam(format!(
            "need finite a >= 0 and b >= 0, got a={a} b={b}"
        )));
    }
    let r = cfg.r();
    let big_b = r + 2.0 * b;
    let shifted = r * x - c;
    let left = x < c / r;
    let prox = if a <= 1e-14 * 1f64.max(b).max(c.abs()) {
        shifted / big_b
    } else {
        // both branches in the form 2(rx - c) / (B + sqrt(B^2 -+ 12a(rx - c)))
        let disc = if left {
            big_b * big_b - 12.0 * a * shifted
        } else {
            big_b * big_b + 12.0 * a * shifted
        };
        2.0 * shifted / (big_b + disc.max(0.0).sqrt())
    };
    let cube = if left { -a * prox.powi(3) } else { a * prox.powi(3) };
    let envelope = cube + b * prox * prox + d - prox * shifted + r / 2.0 * (prox * prox + x * x);
    Ok(ProxResult {
        prox,
        envelope,
        gradient: r * (x - prox),
        cell: usize::from(!left),
    })
}

/// Cells of the prox-centre axis for `f` at prox-parameter `cfg.r()`.
pub fn partition(f: &PiecewiseCubic, cfg: ProxConfig) -> EnvelopePartition {
    let r = cfg.r();
    let pieces = f.pieces();
    let (lo, hi) = f.bounds();
    let mut cells = Vec::with_capacity(2 * pieces.len() + 1);
    let mut current = f64::NEG_INFINITY;

    if lo.is_finite() {
        let edge = lo + pieces[0].slope(lo) / r;
        cells.push(Cell {
            lo: f64::NEG_INFINITY,
            hi: edge,
            kind: CellKind::Bound { side: Side::Lower, x: lo },
        });
        current = edge;
    }
    for (i, piece) in pieces.iter().enumerate() {
        let (_, u) = f.piece_domain(i);
        let edge = if u.is_finite() {
            (u + piece.slope(u) / r).max(current)
        } else {
            f64::INFINITY
        };
        cells.push(Cell {
            lo: current,
            hi: edge,
            kind: CellKind::Piece(i),
        });
        current = edge;
        if let Some(&x) = f.breakpoints().get(i) {
            let edge = (x + pieces[i + 1].slope(x) / r).max(current);
            cells.push(Cell {
                lo: current,
                hi: edge,
                kind: CellKind::Breakpoint { index: i + 1, x },
            });
            current = edge;
        }
    }
    if hi.is_finite() {
        cells.push(Cell {
            lo: current,
            hi: f64::INFINITY,
            kind: CellKind::Bound { side: Side::Upper, x: hi },
        });
    }
    EnvelopePartition { r, cells }
}

/// A function together with its partition at a fixed `r`, for repeated
/// evaluation.
#[derive(Debug, Clone)]
pub struct MoreauEnvelope {
    f: PiecewiseCubic,
    cfg: ProxConfig,
    partition: EnvelopePartition,
}

impl MoreauEnvelope {
    pub fn new(f: PiecewiseCubic, cfg: ProxConfig) -> Self {
        let partition = partition(&f, cfg);
        Self { f, cfg, partition }
    }

    pub fn function(&self) -> &PiecewiseCubic {
        &self.f
    }

    pub fn config(&self) -> ProxConfig {
        self.cfg
    }

    pub fn partition(&self) -> &EnvelopePartition {
        &self.partition
    }

    pub fn prox(&self, x: f64) -> ProxResult {
        let r = self.cfg.r();
        let cell = self.partition.locate(x);
        let (prox, piece) = match self.partition.cells[cell].kind {
            CellKind::Piece(i) => {
                let (l, u) = self.f.piece_domain(i);
                let p = stationary_point(&self.f.pieces()[i], r, x, false)
                    .expect("lenient root never fails");
                (p.clamp(l, u), i)
            }
            CellKind::Breakpoint { index, x: xb } => (xb, index - 1),
            CellKind::Bound { side: Side::Lower, x: xb } => (xb, 0),
            CellKind::Bound { side: Side::Upper, x: xb } => (xb, self.f.num_pieces() - 1),
        };
        let gap = prox - x;
        ProxResult {
            prox,
            envelope: self.f.pieces()[piece].value(prox) + r / 2.0 * gap * gap,
            gradient: -r * gap,
            cell,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.prox(x).envelope
    }

    pub fn gradient(&self, x: f64) -> f64 {
        self.prox(x).gradient
    }
}

pub fn prox(f: &PiecewiseCubic, cfg: ProxConfig, x: f64) -> ProxResult {
    MoreauEnvelope::new(f.clone(), cfg).prox(x)
}

pub fn envelope(f: &PiecewiseCubic, cfg: ProxConfig, x: f64) -> f64 {
    prox(f, cfg, x).envelope
}

/// `g(x) = f(x) - slope * x`. The envelopes are related by
/// `e_r g(x) = e_r f(x + slope/r) - slope * x - slope^2 / (2r)`.
pub fn affine_tilt(f: &PiecewiseCubic, slope: f64) -> PiecewiseCubic {
    let pieces = f
        .pieces()
        .iter()
        .map(|p| CubicPiece::new(p.a, p.b, p.c - slope, p.d))
        .collect();
    let (lo, hi) = f.bounds();
    PiecewiseCubic::from_parts_unchecked(pieces, f.breakpoints().to_vec(), lo, hi)
}

/// `f` restricted to `[lo, hi]` (intersected with its current domain), with
/// pieces that no longer meet the open interval dropped.
pub fn restrict(f: &PiecewiseCubic, lo: f64, hi: f64) -> Result<PiecewiseCubic> {
    let (flo, fhi) = f.bounds();
    let (lo, hi) = (lo.max(flo), hi.min(fhi));
    if !(lo < hi) {
        return Err(Error::EmptyDomain { lo, hi });
    }
    let keep: Vec<usize> = (0..f.num_pieces())
        .filter(|&i| {
            let (l, u) = f.piece_domain(i);
            l < hi && u > lo
        })
        .collect();
    let pieces = keep.iter().map(|&i| f.pieces()[i]).collect();
    let breakpoints = keep[..keep.len() - 1]
        .iter()
        .map(|&i| f.breakpoints()[i])
        .collect();
    PiecewiseCubic::new(pieces, breakpoints, Some((lo, hi)))
}
