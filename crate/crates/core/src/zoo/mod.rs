//! Instance families and the counting arguments built on them.

mod analysis;
mod cg_search;
mod instances;

pub use analysis::{
    classify_splits, count_generation_nodes, count_vertices_in_split, lp_value_lemma_violations,
    optimal_vertex_count, p_bound, sparse_cut, sparse_cut_is_trivial, sparse_cut_sweep,
    sperner_count, sperner_sweep, vertex_split_sweep, NodeClass, SpernerRow, SplitClassification,
    SplitTag, TrivialitySweep, VertexSplitRow, MAX_POINT_DIM,
};
pub use cg_search::{directional_cg_search, fractions_below_one, one_round_cg_search, CgSearchReport};
pub use instances::{
    cks_tetrahedron, cks_tetrahedron_with, cks_vertices, facets_from_vertices_3d,
    jeroslow_equality, jeroslow_inequality, jeroslow_partial_objective, random_bounded,
    triangle_t,
};
