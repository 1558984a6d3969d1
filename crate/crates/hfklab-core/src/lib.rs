//! Rank tables of knot Floer homology for L-space and alternating knots,
//! the rank inequalities relating a 2-periodic knot to its quotient, the
//! square/staircase decomposition machinery for F2 bicomplexes behind
//! them, and a pseudorandom periodic-knot generation harness.

pub mod bicomplex;
pub mod f2lin;
pub mod hfk;
pub mod laurent;
pub mod periodic;
pub mod report;
pub mod rng;
pub mod tangle;

pub use hfk::HfkTable;
pub use laurent::LaurentPoly;
pub use report::CheckReport;
