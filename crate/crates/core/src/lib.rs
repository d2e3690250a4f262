//! Chromatic triangulation: perfect phylogeny, colored and multicolored graph
//! triangulation, zipper gadgets and the reductions between them.

pub mod bitset;
pub mod decomposition;
pub mod dot;
pub mod error;
pub mod graph;
pub mod oracles;
pub mod phylogeny;
pub mod random;
pub mod reductions;
pub mod solver;
pub mod sweep;
pub mod tcmis;
pub mod text;
pub mod zipper;

pub use bitset::{BitSet, ColorSet, VertexSet};
pub use error::{Error, Result};
