//! Nerves of maps and univalence.

mod nerve;
mod report;
mod squares;

pub use nerve::NerveOfMap;
pub use report::{ReportSizes, UnivalenceReport};
pub use squares::{MonoClassification, PullbackSquareMorphism, UniIffMono, UniversalMono};
