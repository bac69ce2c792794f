//! Proof transformations: cuts to branching, lifting between spaces, and
//! composition of instances.

mod compose;
mod cp_to_bb;
mod embed;
#[cfg(test)]
mod tests;

pub use compose::{compose_complementary, CompositionGadget};
pub use cp_to_bb::{bc_proof_to_bb, certificate_oracle, cp_proof_to_bb, normalize_cuts};
pub use embed::{
    add_objective_variable, embed_instance, lift_embedded, lift_objective_variable,
    project_embedded, project_objective_variable,
};
