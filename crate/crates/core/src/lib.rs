//! Models of block-structured network coding instances: finite alphabets and
//! modular arithmetic, directed acyclic multigraph networks, fractional codes
//! over rings, groups and prime fields, exhaustive and linear verification,
//! and small code searches.

pub mod algebra;
pub mod build;
pub mod codes;
pub mod error;
pub mod net;
pub mod rng;
pub mod search;

pub use error::{Error, Result};
