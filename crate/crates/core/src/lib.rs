//! Scalability analysis for finite unit-norm frames in `R^n`.
//!
//! A scaling of a frame `F = {f_i}` is a nonnegative weight vector `c` such
//! that `{sqrt(c_i) f_i}` is a Parseval frame. The crate decides whether a
//! frame is scalable, enumerates its minimal scalings (the vertices of the
//! scalability polytope), and analyzes the tight-subframe structure of
//! scaled frames.
//!
//! Two scalar modes are supported: `f64` with a relative tolerance, and exact
//! rationals for frames given by a rational Gram matrix.

pub mod error;
pub mod frame;
pub mod io;
pub mod numerics;
pub mod scaling;
pub mod structure;
mod subset;

pub use error::{Error, Result};
pub use frame::{diagram_vector, DiagramGramian, DiagramVector, Frame, FrameBounds, Tightness};
pub use numerics::{Field, Rational, ScalarKind, ScalarMode};
pub use scaling::{MinimalScalingSet, ScalingVector};
pub use subset::IndexSet;
