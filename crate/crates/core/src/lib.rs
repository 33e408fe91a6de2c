//! Special (non-equidistributed) directions of point sets and rational-valued
//! functions on the affine plane over a prime field `F_p`.
//!
//! The crate is organised around a handful of modules:
//!
//! - [`plane`]: prime-field points, directions, lines, line-sum profiles.
//! - [`group`]: the affine group `AGL(2,p)` acting on sets, grids and directions.
//! - [`redei`]: Rédei polynomials, their symmetric coefficients and power sums.
//! - [`decomposition`]: exact decomposition of a function into weighted lines.
//! - [`constructions`]: triangular sets, the shift/`L` operator calculus and the
//!   four-direction pipeline together with the figure fixtures.
//! - [`search`]: bitmask-parallel exhaustive scans, orbit enumeration and
//!   annealing probes.
//! - [`format`]: the ASCII and JSON grid file formats.
//!
//! All arithmetic is exact. Grids carry either `i64` or arbitrary-precision
//! rational values. Only the annealing acceptance rule uses floating point,
//! and every witness it reports is re-verified exactly.

pub mod constructions;
pub mod decomposition;
pub mod error;
pub mod field;
pub mod format;
pub mod group;
pub mod plane;
pub mod redei;
pub mod search;

pub use error::{Error, Result};
pub use field::Prime;
pub use plane::{
    ghidelli_bound, Direction, Grid, IntegerGrid, LineProfile, Point, PointSet, RationalGrid,
};

/// Exact rational numbers used throughout the crate.
pub type Rational = num_rational::BigRational;
