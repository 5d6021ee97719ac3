//! Finite-alphabet algebra: modular arithmetic, factorization helpers, finite
//! abelian groups, permutations and matrices over Z_n.

pub mod alphabet;
pub mod arith;
pub mod factor;
pub mod groups;
pub mod matrix;
pub mod perm;

pub use alphabet::Alphabet;
pub use groups::FiniteAbelianGroup;
pub use matrix::RingMatrix;
pub use perm::Permutation;
