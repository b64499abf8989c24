#![allow(dead_code)]

use moreau::oracle::{prox_oracle_1d, OracleSettings};
use moreau::{CubicPiece, PiecewiseCubic, ProxConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn cfg(r: f64) -> ProxConfig {
    ProxConfig::new(r).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn three_piece() -> PiecewiseCubic {
    PiecewiseCubic::new(
        vec![
            CubicPiece::new(0.0, 0.0, -5.0, -2.0),
            CubicPiece::new(0.0, 1.0, -2.0, 0.0),
            CubicPiece::new(1.0, 0.0, 0.0, 0.0),
        ],
        vec![-1.0, 0.0],
        None,
    )
    .unwrap()
}

pub fn square_cube() -> PiecewiseCubic {
    PiecewiseCubic::new(
        vec![CubicPiece::new(0.0, 1.0, 0.0, 0.0), CubicPiece::new(1.0, 0.0, 0.0, 0.0)],
        vec![0.0],
        None,
    )
    .unwrap()
}

pub fn abs_cube() -> PiecewiseCubic {
    PiecewiseCubic::new(
        vec![CubicPiece::new(-1.0, 0.0, 0.0, 0.0), CubicPiece::new(1.0, 0.0, 0.0, 0.0)],
        vec![0.0],
        None,
    )
    .unwrap()
}

/// `x` on `[-1, 2]`.
pub fn bounded_identity() -> PiecewiseCubic {
    PiecewiseCubic::single(CubicPiece::affine(1.0, 0.0), Some((-1.0, 2.0))).unwrap()
}

pub fn abs() -> PiecewiseCubic {
    PiecewiseCubic::new(
        vec![CubicPiece::affine(-1.0, 0.0), CubicPiece::affine(1.0, 0.0)],
        vec![0.0],
        None,
    )
    .unwrap()
}

pub fn goldens() -> Vec<(&'static str, PiecewiseCubic)> {
    vec![
        ("three-piece", three_piece()),
        ("square-cube", square_cube()),
        ("abs-cube", abs_cube()),
        ("bounded-identity", bounded_identity()),
        ("abs", abs()),
    ]
}

pub fn oracle(f: &PiecewiseCubic, r: f64, x: f64) -> (f64, f64) {
    prox_oracle_1d(f, cfg(r), x, &OracleSettings::exhaustive()).unwrap()
}

/// `n` evenly spaced points of `[lo, hi]`.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (lo + (hi - lo) * k as f64 / (n - 1) as f64).min(hi))
        .collect()
}
