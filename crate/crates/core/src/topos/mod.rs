//! Finite presheaf toposes: presheaves and natural transformations, finite
//! limits, exponentials, the subobject classifier, base change and dependent
//! products.

mod enumerate;
mod exponential;
mod homs;
mod limits;
mod omega;
mod presheaf;
mod slice;

pub use exponential::Exponential;
pub use homs::HomSearch;
pub use limits::{PsDiagram, PsLimit};
pub use omega::Omega;
pub use presheaf::{NatTrans, Presheaf, SliceMap, Topos};
pub use slice::DependentProduct;
