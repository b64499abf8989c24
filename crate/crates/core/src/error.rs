use thiserror::Error;

/// Errors produced by validation, evaluation and the numerical routines.
///
/// Breakpoint and piece numbers in the validation variants are 1-based, so
/// `SlopeDecrease { index: 1, .. }` refers to the first breakpoint `x_1`
/// joining pieces `f_1` and `f_2`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("function has no pieces")]
    NoPieces,
    #[error("expected {expected} breakpoints for {pieces} pieces, got {got}")]
    LengthMismatch {
        pieces: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite coefficient in piece {0}")]
    NonFinite(usize),
    #[error("breakpoints must be finite and strictly increasing")]
    BadBreakpoints,
    #[error("bounds must satisfy lo < x_1 < ... < x_{{m-1}} < hi")]
    BadBounds,
    #[error("NotContinuous at x_{index}={x}: f_{index}({x})={left} != f_{next}({x})={right}", next = .index + 1)]
    NotContinuous {
        index: usize,
        x: f64,
        left: f64,
        right: f64,
    },
    #[error("NotConvexPiece f_{index}: second derivative {curvature} < 0 at x={x}")]
    NotConvexPiece { index: usize, x: f64, curvature: f64 },
    #[error("SlopeDecrease at x_{index}={x}: f_{index}'({x})={left} > f_{next}'({x})={right}", next = .index + 1)]
    SlopeDecrease {
        index: usize,
        x: f64,
        left: f64,
        right: f64,
    },
    #[error("x={0} is outside the domain")]
    OutOfDomain(f64),
    #[error("empty domain [{lo}, {hi}]")]
    EmptyDomain { lo: f64, hi: f64 },
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("negative discriminant {0}: prox-centre outside the piece's cell")]
    NegativeDiscriminant(f64),
    #[error("no sign change found while bracketing the proximal point")]
    NoBracket,
    #[error("iteration limit of {0} exceeded")]
    MaxIterExceeded(usize),
    #[error("smoothed gauge vanishes along the ray at angle {0}")]
    DegenerateRay(f64),
    #[error("function spec: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
