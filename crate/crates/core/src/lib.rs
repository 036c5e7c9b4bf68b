//! Exact bounds for placing non-attacking dots in a triangular grid.
//!
//! A triangle of side `n` holds `n(n+1)/2` cells. `N(n)` is the largest number
//! of dots that can be placed so that every row, column and southwest-to-northeast
//! diagonal holds at most one dot. This crate pins `N(n) = ⌊(2n+1)/3⌋` from both
//! sides with exact arithmetic:
//!
//! - [`construction`] builds a valid placement of that size (lower bound),
//! - [`certificate`] builds a feasible point of the dual LP whose objective
//!   floors to the same value (upper bound, by weak duality),
//! - [`exact_solver`] and [`simplex`] recompute `N(n)` and the LP optimum
//!   independently so the closed forms can be cross-checked.

pub mod certificate;
pub mod closed_forms;
pub mod construction;
mod error;
pub mod exact_solver;
pub mod geometry;
pub mod lp_model;
pub mod rational;
pub mod simplex;

pub use certificate::{DualCertificate, FeasibilityReport};
pub use error::{Error, Result};
pub use geometry::{Cell, LineFamily, LineIndices, TriangleSize};
pub use lp_model::{LpProblem, LpSolution, LpStatus, Relation, Sense};
pub use rational::Rational;
