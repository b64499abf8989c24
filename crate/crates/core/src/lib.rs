//! Moreau envelopes and proximal points of convex piecewise-cubic functions,
//! and smoothing of planar gauges.

// `!(a <= b)` is used on purpose so NaN fails range checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fmt;
pub mod function_file;
pub mod gauge;
pub mod oracle;
pub mod piecewise;
pub mod prox;
pub mod sample;

pub use error::{Error, Result};
pub use function_file::FunctionSpec;
pub use gauge::{Gauge2D, GaugeGradient, RegionLabel, SmoothedGauge};
pub use oracle::OracleSettings;
pub use piecewise::{CubicPiece, PiecewiseCubic, SubgradientInterval};
pub use prox::{Cell, CellKind, EnvelopePartition, MoreauEnvelope, ProxConfig, ProxResult};
