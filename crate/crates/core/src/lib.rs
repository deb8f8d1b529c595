//! Certified bounds and exact values for the entropy and guessing numbers of
//! small graphs and digraphs.

pub mod bounds;
pub mod enumerate;
pub mod error;
pub mod families;
pub mod format;
pub mod graph;
pub mod guessing;
pub mod lp;
pub mod rational;
pub mod structure;
pub mod survey;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{BipartiteView, Graph, VertexSet};
pub use rational::Rational;
