//! Reductions between phylogeny, colored and multicolored triangulation, and
//! tree-chained multicolor independent set.

pub mod pp;
pub mod tcmis;
pub mod tmg;
mod witness;

pub use witness::{
    build_decomposition_from_solution, build_decomposition_with_offsets, extended_pair_fill, extract_tcmis_solution,
    extract_tcmis_solution_from_decomposition, offsets_for_solution,
};
