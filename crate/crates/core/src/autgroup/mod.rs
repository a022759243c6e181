//! Monomial automorphism groups, their action on cosets, complete
//! transitivity and monomial equivalence.
//!
//! Automorphisms are handled through the matrix `S` they induce on
//! syndromes, so orbit computations run on `q^R` syndromes rather than on
//! vectors of length `N`.

mod ct;
mod monomial;
mod orbits;
mod search;
mod structured;

pub use ct::{ct_necessary_bound, is_completely_transitive, CtMethod, CtOutcome, CtVerdict, NecessaryBound};
pub use monomial::{is_automorphism, is_equivalence, MonomialMap, StabilizerElement};
pub use orbits::{orbits_on_cosets, syndrome_permutation, Orbit, OrbitPartition};
pub use search::{
    code_equivalence, maut_search, AutGroupResult, Equivalence, SearchOptions, SearchOutcome, DEFAULT_NODE_LIMIT,
    MAX_SEARCH_SPACE,
};
pub use structured::{gl_generators, gl_lift_generators, gl_order, group_order_by_closure};
