//! Finite sets with canonical elements, finite functions, finite categories
//! presented by tables, and limits of finite diagrams.

mod category;
mod element;
mod limit;
mod set;

pub use category::FiniteCategory;
pub use element::Element;
pub use limit::{fin_limit, fin_limit_bounded, fin_pullback, Diagram, FinLimit};
pub(crate) use limit::limit_unchecked;
pub use set::{fin_product, fin_product_bounded, FinFunction, FinSet};
