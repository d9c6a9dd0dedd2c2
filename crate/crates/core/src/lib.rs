//! Stable tropical lines through two columns of a normal idempotent max-plus
//! matrix.
//!
//! A square matrix `A` with zero diagonal and nonpositive entries is normal;
//! it is normal idempotent (NI) when moreover `a_ik + a_kj <= a_ij` for all
//! indices, i.e. `A ⊙ A = A`. For two columns `p` and `q` of such a matrix,
//! the stable line `L(p, q)` is a metric caterpillar tree whose inner
//! vertices all lie on the tropical segment from `p` to `q`.
//! [`build_tree`] constructs it leaf by leaf from the matrix of differences
//! of the two columns, and [`oracle::verify_tree`] checks the result by brute
//! force.
//!
//! All arithmetic is exact over `i128` rationals.
//!
//! ```
//! use troplin::{build_tree, NiMatrix};
//!
//! let a = NiMatrix::from_ints(&[
//!     &[0, -12, -14, -15],
//!     &[-10, 0, -15, -15],
//!     &[-11, -14, 0, -14],
//!     &[-15, -13, -15, 0],
//! ])?;
//! let line = build_tree(&a, 0, 1)?;
//! assert_eq!(line.total_length(), 22.into());
//! assert_eq!(line.vertices.len(), 2);
//! # Ok::<(), troplin::Error>(())
//! ```

pub mod batch;
pub mod diff;
mod error;
pub mod maxplus;
pub mod ni;
pub mod oracle;
pub mod tree;

pub use diff::{build_f, DifferenceMatrix};
pub use error::{Error, Result};
pub use maxplus::{tconv, trop_distance, Matrix, ProjectivePoint, Scalar};
pub use ni::{closure, random_ni, validate_ni, NiMatrix, NormalMatrix};
pub use oracle::{verify_tree, VerificationReport};
pub use tree::{build_tree, MetricTree};
