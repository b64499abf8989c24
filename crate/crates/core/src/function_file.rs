//! JSON function-spec documents.
//!
//! ```json
//! { "pieces": [{"a":0,"b":0,"c":-5,"d":-2}, ...], "breakpoints": [-1, 0], "bounds": [null, null] }
//! ```
//!
//! `null` bounds mean unbounded. `breakpoints` and `bounds` may be omitted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piecewise::{CubicPiece, PiecewiseCubic};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub pieces: Vec<CubicPiece>,
    #[serde(default)]
    pub breakpoints: Vec<f64>,
    #[serde(default)]
    pub bounds: Option<[Option<f64>; 2]>,
}

impl FunctionSpec {
    /// Parse a document. Syntax errors carry the line and column reported by
    /// the JSON parser; an empty piece list is also a parse error.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if spec.pieces.is_empty() {
            return Err(Error::Parse("\"pieces\" must not be empty".into()));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }

    /// Validate into a [`PiecewiseCubic`].
    pub fn build(&self) -> Result<PiecewiseCubic> {
        let bounds = self.bounds.map(|[lo, hi]| {
            (
                lo.unwrap_or(f64::NEG_INFINITY),
                hi.unwrap_or(f64::INFINITY),
            )
        });
        PiecewiseCubic::new(self.pieces.clone(), self.breakpoints.clone(), bounds)
    }
}

impl From<&PiecewiseCubic> for FunctionSpec {
    fn from(f: &PiecewiseCubic) -> Self {
        let (lo, hi) = f.bounds();
        let finite = |v: f64| v.is_finite().then_some(v);
        Self {
            pieces: f.pieces().to_vec(),
            breakpoints: f.breakpoints().to_vec(),
            bounds: Some([finite(lo), finite(hi)]),
        }
    }
}
