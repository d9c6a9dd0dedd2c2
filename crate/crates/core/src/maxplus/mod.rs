//! Exact max-plus arithmetic on scalars, points of the tropical projective
//! space, matrices and tropical segments.
//!
//! Nothing here uses `-inf`; every scalar is a finite rational.

mod matrix;
mod point;
mod scalar;
mod segment;

pub use matrix::{rank2_membership, trop_det, trop_matmul, Matrix, TropDet};
pub use point::{trop_distance, ProjectivePoint};
pub use scalar::Scalar;
pub use segment::{integer_length, tconv, tconv_contains, Piece, TropicalSegment};
