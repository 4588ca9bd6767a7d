//! Free loops in a fibre, their variations along monodromy loops, and the
//! numeric pairing with the multivalued form that detects the triangle's
//! commutator.

mod pairing;
mod var;
mod word;

pub use pairing::{
    diagnose, integrate_word, pair_on_branch, pair_with_form, Diagnosis, PathIntegrals, PuncturedModel, MAX_TURN,
    WELL_DEFINED_TOL,
};
pub use var::{var, var_iter, Twist, A3_TABLE_PROVENANCE};
pub use word::{homology_class, Alphabet, Gen, Letter, LoopWord};
