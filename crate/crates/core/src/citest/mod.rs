//! Conditional-independence sources: a p-separation oracle, Fisher's z-test
//! and the G² test, behind one cached query interface.

mod dataset;
mod sepset;
mod source;
pub mod stats;

pub use dataset::{DataKind, Dataset, MAX_AUTO_LEVELS};
pub use sepset::SepSetMap;
pub use source::{Backend, CiSource};
