//! Truncated formal series.
//!
//! Two shapes are used by the generating-function engine: [`UvwSeries`], a
//! series in the three bookkeeping variables (u, v, w) with hard per-variable
//! bounds and an optional total-degree cap, and [`ZSeries`], a series in z
//! whose coefficients are themselves ring elements. Arithmetic never
//! re-truncates silently: mixing bounds is a hard error, and z-bound changes
//! go through explicit methods.

mod newton;
mod uvw;
mod zseries;

pub use newton::{newton_power_sums, RootPair};
pub use uvw::{SeriesBounds, UvwSeries};
pub use zseries::ZSeries;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series bound mismatch: {0} vs {1}")]
    BoundMismatch(String, String),
    #[error("monomial u^{i} v^{j} w^{l} is outside the series bounds")]
    OutOfBounds { i: usize, j: usize, l: usize },
    #[error("constant term is not invertible")]
    NonInvertibleConstant,
    #[error("exp needs a zero constant term")]
    NonzeroConstantTerm,
    #[error("z-order {m} exceeds the series bound {bound}")]
    ZOrderOutOfBounds { m: usize, bound: usize },
}
