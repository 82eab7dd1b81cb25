//! AMP chain graphs: p-separation, minimal separators, and constraint-based
//! structure learning (PC-like and LCD-like learners).

pub mod algorithm;
pub mod citest;
pub mod error;
pub mod graph;
pub mod lcd;
pub mod learn;
pub mod separation;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{triplex_equivalent, ChainGraph, Link, Triplex, UndirectedGraph, Vertex, VertexSet};
pub use separation::{p_separated_aug, p_separated_pathwise, SeparationQuery};
pub use citest::{CiSource, Dataset, SepSetMap};
pub use algorithm::Algorithm;
pub use lcd::{lcd_amp, SeparationTree, UigMethod};
pub use learn::{learn, LearnConfig, Learned, Variant};
pub use synth::{metrics, random_amp_cg, GenConfig, MetricsReport};
