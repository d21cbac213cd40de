//! Internal category theory in finite presheaf toposes.
//!
//! The crate computes in a finite presheaf topos `Set^(C^op)`: limits,
//! exponentials, the subobject classifier and dependent products. On top of
//! that it builds truncated simplicial objects, checks the Segal and
//! completeness conditions, constructs the object of equivalences, and
//! decides univalence of a map `p: E → B` by checking completeness of the
//! internal category of fiberwise maps of `p`.
//!
//! Equivalences are isomorphisms and homotopies are equalities throughout.

pub mod corpus;
pub mod error;
pub mod finset;
pub mod io;
pub mod segal;
pub mod topos;
pub mod univalence;

pub use error::{Error, Result, DEFAULT_BOUND};
pub use finset::{Element, FinFunction, FinSet, FiniteCategory};
pub use topos::{NatTrans, Presheaf, SliceMap, Topos};
