//! Scalar modes, dense linear algebra and a small simplex solver.

mod field;
pub mod linalg;
pub mod lp;
mod matrix;

pub use field::{decimal_to_rational, parse_rational, Field, Rational, ScalarKind, ScalarMode, DEFAULT_TOL};
pub use linalg::{independent_rows, nullspace_basis, psd_rank, rank, rref, solve, Echelon, LinearSolution};
pub use lp::{lp_solve, LinearProgram, LpResult, LpStatus};
pub use matrix::{dot, DenseMatrix};
