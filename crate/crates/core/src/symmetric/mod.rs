//! Symmetric-group combinatorics: permutations and their classes,
//! irreducible characters, the group algebra element `G = Σ n^{#σ} σ`, its
//! Jucys–Murphy factorization, and monotone factorization counts.

mod algebra;
mod characters;
mod monotone;
mod partition;
mod perm;

pub use algebra::{build_g, jm_element, jm_product, GroupAlgebraElement, MAX_SYMBOLIC_DEGREE};
pub use characters::{character, character_table};
pub use monotone::{
    count_monotone_factorizations, count_monotone_factorizations_capped, DEFAULT_MAX_LENGTH,
};
pub use partition::{dimension_sn, dimension_un, factorial, CycleType, Partition, YoungDiagram};
pub use perm::{enumerate_group, Permutation, MAX_ENUMERATION_DEGREE};

pub(crate) use perm::all_permutations;
