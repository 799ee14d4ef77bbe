//! Higher-dimensional automata as pointed precubical sets: cube paths and
//! their homotopy, unfoldings, and a decision procedure for
//! (history-preserving) bisimilarity.

mod error;

pub mod bisim;
pub mod cubes;
pub mod model;
pub mod paths;
pub mod random;
pub mod unfold;

pub use error::{HdaError, Result};
