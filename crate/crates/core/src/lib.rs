//! Exact symbolic machinery for infinitesimally equivariant bundles on a
//! polydisc: truncated Lie algebras of formal vector fields, matrix-valued
//! Lie maps and their cocycle identity, the correspondence with
//! representations, and the line-bundle obstruction on the projective line.

pub mod error;
pub mod formal;
pub mod lie;
pub mod atiyah;
pub mod cli;
pub mod correspondence;
pub mod json;
pub mod obstruction;

pub use error::{Error, Result};
