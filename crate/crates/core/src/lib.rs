//! Exact and certified-numeric toolkit for interpolated multiple t-values of
//! general level.
//!
//! The crate has three layers:
//!
//! * an exact layer: index combinatorics ([`index`]), a small coefficient-ring
//!   abstraction with truncated multivariate series ([`ring`], [`series`]),
//!   and the generating-function engine that solves the defining ODE
//!   recurrence and cross-checks it against brute-force enumeration
//!   ([`genfun`]);
//! * a numeric layer: an arbitrary-precision real type carrying a running
//!   error bound ([`bigreal`]) and evaluators for the t-values themselves and
//!   for the closed forms they are compared against ([`numeric`]);
//! * a verification layer: a registry of named checks producing JSON reports
//!   ([`verify`]).

pub mod bernoulli;
pub mod bigreal;
pub mod genfun;
pub mod index;
pub mod level;
pub mod numeric;
pub mod ring;
pub mod series;
pub mod verify;

pub use bigreal::BigReal;
pub use index::{Index, IndexStats};
pub use level::Level;
