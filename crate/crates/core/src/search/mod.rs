//! Exhaustive search for minimum branch-and-bound proofs over bounded split
//! families.

mod minimum;
mod space;
mod symmetry;
#[cfg(test)]
mod tests;

pub use minimum::{min_bb_tree_size, min_proof_bracket, Bracket, Minimum, SearchOutcome};
pub use space::{combinations_of, enumerate_splits, split_data, SearchSpace, DEFAULT_SEARCH_BUDGET};
pub use symmetry::{automorphisms, MAX_SYMMETRY_DIM};
