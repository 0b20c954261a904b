//! Compression maps `x -> m/x` on tuples, their derived statistics, the balls
//! and lines they induce, needle walks, and the bound checks and searches
//! built on top of them.

pub mod ball;
pub mod bounds;
pub mod compression;
pub mod error;
pub mod graph;
pub mod experiments;
pub mod line;
pub mod rat;
pub mod scalar;
pub mod sweep;
pub mod tuple;
pub mod walk;

pub use error::{Error, Result};
pub use rat::Rat;
pub use scalar::{Scalar, REL_TOL};
pub use tuple::{NatTuple, Scale, Tuple};
