//! The network model: directed acyclic multigraph specifications, codes that
//! assign functions to edges and decoders to receivers, evaluation,
//! verification, structural block discovery and artifact export.

pub mod code;
pub mod dot;
pub mod eval;
pub mod network;
pub mod property;
pub mod structure;
pub mod union;
pub mod verify;
