//! Truncated simplicial objects, the Segal and completeness conditions.

mod category;
mod check;
mod functor;
mod mapping;
mod simplicial;

pub use category::{nerve_truncation, nerve_unchecked, CategoryObject, Nerve};
pub use check::{
    chain_limit, is_segal, CompletenessReport, EquivalencesObject, SegalLevel, SegalObject, SegalReport, Z3,
};
pub use functor::SimplicialMap;
pub use mapping::MappingObject;
pub use simplicial::TruncatedSimplicialObject;
