//! Exact computations for normal affine surfaces and higher-dimensional cones
//! carrying an effective one-dimensional torus action with an attractive
//! fixed point.
//!
//! A cone singularity is encoded by a couple `(P^1, D)` with `D` an ample
//! Q-divisor. From it the crate computes the log Fano quotient, the vertex
//! log discrepancy, the graded section ring, the minimal resolution graph
//! and an exhaustive catalog of `eps`-lc cones with bounded isotropy. Toric
//! bases of higher dimension are handled through lattice cones.

pub mod counterexamples;
pub mod demazure;
pub mod divisor;
pub mod enumerate;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod quotient;
pub mod resolution;
pub mod scalar;
pub mod toric;

pub use divisor::{CurveCouple, IntegralDivisorP1, MarkedPoint, NormalForm, NormalFormKey, QDivisorP1};
pub use error::{ConeError, Result};
pub use scalar::{Rational, Scalar};

pub type QMatrix = linalg::Matrix<Rational>;
pub type QPoly = poly::Poly<Rational>;
