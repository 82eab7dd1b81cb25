//! PC-like structure learners for AMP chain graphs: skeleton recovery,
//! conservative triple labelling and orientation.

mod orient;
mod skeleton;
mod triples;

pub use orient::{orient, reorient, unshielded_triples, TripleKind, TripleLabel};
pub use skeleton::{LevelStats, SearchMode, Skeleton, TraceEntry};
pub use triples::label_triples;

pub(crate) use skeleton::{search, Adjacency, SearchSpec};

use std::str::FromStr;

use crate::citest::CiSource;
use crate::error::{Error, Result};
use crate::graph::{ChainGraph, Vertex};

/// Which PC-like learner to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Original,
    Stable,
    Conservative,
    StableConservative,
}

impl Variant {
    pub const ALL: [Variant; 4] =
        [Variant::Original, Variant::Stable, Variant::Conservative, Variant::StableConservative];

    pub fn mode(self) -> SearchMode {
        match self {
            Variant::Original | Variant::Conservative => SearchMode::Original,
            Variant::Stable | Variant::StableConservative => SearchMode::Stable,
        }
    }

    pub fn is_conservative(self) -> bool {
        matches!(self, Variant::Conservative | Variant::StableConservative)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Original => "pc",
            Variant::Stable => "stable",
            Variant::Conservative => "conservative",
            Variant::StableConservative => "stable-conservative",
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown learner `{s}`")))
    }
}

/// Settings of a learning run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnConfig {
    pub variant: Variant,
    /// Variable order by name; the source's own order when `None`.
    pub order: Option<Vec<String>>,
    /// Largest conditioning set tried during skeleton recovery and, for
    /// conservative variants, during triple labelling.
    pub max_sepset_size: Option<usize>,
    /// Run the stable levels on the rayon pool.
    pub parallel: bool,
    /// Record every tested pair.
    pub trace: bool,
}

impl LearnConfig {
    pub fn new(variant: Variant) -> Self {
        LearnConfig { variant, order: None, max_sepset_size: None, parallel: false, trace: false }
    }

    pub fn with_order<S: AsRef<str>>(mut self, order: &[S]) -> Self {
        self.order = Some(order.iter().map(|s| s.as_ref().to_string()).collect());
        self
    }

    /// The variable order as vertex indices of `names`.
    pub fn resolve_order(&self, names: &[String]) -> Result<Vec<Vertex>> {
        let Some(order) = &self.order else {
            return Ok((0..names.len()).collect());
        };
        let mut seen = vec![false; names.len()];
        let mut out = Vec::with_capacity(order.len());
        for name in order {
            let v = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Config(format!("order names unknown variable `{name}`")))?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::Config(format!("order repeats `{name}`")));
            }
            out.push(v);
        }
        if out.len() != names.len() {
            return Err(Error::Config("order must list every variable exactly once".into()));
        }
        Ok(out)
    }
}

/// Output of a learning run.
#[derive(Debug, Clone)]
pub struct Learned {
    pub graph: ChainGraph,
    pub skeleton: Skeleton,
    /// Triple labels of the conservative variants.
    pub labels: Option<Vec<TripleLabel>>,
}

/// Skeleton recovery from the complete graph, as selected by `cfg.variant`.
pub fn skeleton(src: &CiSource, cfg: &LearnConfig) -> Result<Skeleton> {
    let order = cfg.resolve_order(src.names())?;
    let spec = SearchSpec {
        order: &order,
        mode: cfg.variant.mode(),
        max_level: cfg.max_sepset_size,
        parallel: cfg.parallel,
        trace: cfg.trace,
    };
    search(src, Adjacency::complete(src.n_vars(), &order), &spec)
}

/// Conservative labels for a finished skeleton. The subset-size cap is
/// `cfg.max_sepset_size`, defaulting to the deepest level the skeleton
/// search reached.
pub fn conservative_labels(src: &CiSource, skel: &Skeleton, cfg: &LearnConfig) -> Result<Vec<TripleLabel>> {
    let cap = cfg.max_sepset_size.unwrap_or_else(|| skel.max_level().unwrap_or(0));
    let cap = src.max_conditioning().map_or(cap, |m| cap.min(m));
    label_triples(src, &skel.graph, cap)
}

/// Runs the learner selected by `cfg.variant`.
pub fn learn(src: &CiSource, cfg: &LearnConfig) -> Result<Learned> {
    let skel = skeleton(src, cfg)?;
    finish(src, skel, cfg)
}

/// Labelling (for conservative variants) and orientation of a skeleton.
pub(crate) fn finish(src: &CiSource, skel: Skeleton, cfg: &LearnConfig) -> Result<Learned> {
    let labels = if cfg.variant.is_conservative() {
        Some(conservative_labels(src, &skel, cfg)?)
    } else {
        None
    };
    let graph = orient(&skel.graph, &skel.sepsets, labels.as_deref());
    Ok(Learned { graph, skeleton: skel, labels })
}

#[cfg(test)]
mod tests;
