//! Exact scalars, polynomials, truncated series and polynomial vector fields.
//!
//! Holomorphic functions on the polydisc are modelled by polynomials over
//! the Gaussian rationals; series with an explicit weight cutoff are used
//! where inverses are needed.

mod matrix;
mod multi_index;
mod poly;
mod scalar;
mod series;
mod vector_field;

pub use matrix::{sl2_triple, ScalarMatrix};
pub use multi_index::MultiIndex;
pub use poly::Poly;
pub use scalar::Scalar;
pub use series::TruncatedSeries;
pub use vector_field::{euler_field, monomial_label, VectorField};
