//! Exact computations for completely regular and completely transitive
//! q-ary codes obtained by concatenating copies of Hamming codes.
//!
//! - [`gf`]: finite fields and the extension `F_{q^m}` over `F_q`.
//! - [`linalg`]: matrices over `F_q`, projective points, packed vectors.
//! - [`codes`]: linear codes, coset weights and intersection arrays.
//! - [`constructions`]: Hamming matrices and the families `B^(r)`, `A^(r)`, `C^(r)`.
//! - [`autgroup`]: monomial automorphism groups, orbits on cosets, equivalence.

pub mod autgroup;
pub mod codes;
pub mod constructions;
pub mod error;
pub mod gf;
pub mod linalg;

pub use codes::{IntersectionArray, LinearCode};
pub use constructions::{Construction, ConstructionSpec, Family};
pub use error::{Error, Result};
