//! Primitives for running and measuring tree-based genetic programming.
//!
//! The crate is organised bottom-up: [`tree`] and [`mutation`] provide the
//! representation and the HVL-Prime variation operator, [`structural`] and
//! [`boolean`], [`max`] and [`identification`] define fitness landscapes,
//! [`problem`] adapts them to the search [`engine`]s, and [`gsgp`] holds the
//! geometric semantic variant that works on output vectors instead of trees.

pub mod boolean;
pub mod dyadic;
pub mod engine;
pub mod gsgp;
pub mod identification;
pub mod max;
pub mod mutation;
pub mod problem;
pub mod rng;
pub mod structural;
pub mod tree;

pub use dyadic::Dyadic;
pub use rng::RandomSource;
pub use tree::{Function, Literal, NodeContent, NodeId, SyntaxTree, Terminal};
