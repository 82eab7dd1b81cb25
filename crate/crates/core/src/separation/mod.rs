//! p-separation queries and minimal separators in AMP chain graphs.

mod minimal;
mod pathwise;

pub use minimal::{
    enumerate_minimal_separators, find_minimal_separator, is_minimal_separator,
    minimal_separator_sets, restricted_minimal_separator, restricted_separator, Restricted,
};
pub use pathwise::p_separated_pathwise;

use crate::error::{Error, Result};
use crate::graph::{set_to_mask, ChainGraph, Vertex, VertexSet};

/// A query `X ⊥ Y | Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationQuery {
    pub x: VertexSet,
    pub y: VertexSet,
    pub z: VertexSet,
}

impl SeparationQuery {
    pub fn new(x: VertexSet, y: VertexSet, z: VertexSet) -> Self {
        SeparationQuery { x, y, z }
    }

    /// Query between two single vertices.
    pub fn pair(u: Vertex, v: Vertex, z: VertexSet) -> Self {
        SeparationQuery::new(VertexSet::from([u]), VertexSet::from([v]), z)
    }

    /// Query built from vertex names.
    pub fn from_names<S: AsRef<str>>(g: &ChainGraph, x: &[S], y: &[S], z: &[S]) -> Result<Self> {
        Ok(SeparationQuery::new(
            g.vertex_set(x)?,
            g.vertex_set(y)?,
            g.vertex_set(z)?,
        ))
    }

    /// Checks that the sets are disjoint, `X` and `Y` non-empty and every
    /// vertex exists in `g`.
    pub fn validate(&self, g: &ChainGraph) -> Result<()> {
        if self.x.is_empty() || self.y.is_empty() {
            return Err(Error::InvalidQuery("X and Y must be non-empty".into()));
        }
        for &v in self.x.iter().chain(&self.y).chain(&self.z) {
            if v >= g.n() {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
        }
        let overlap = |a: &VertexSet, b: &VertexSet| a.intersection(b).next().copied();
        if let Some(v) = overlap(&self.x, &self.y)
            .or_else(|| overlap(&self.x, &self.z))
            .or_else(|| overlap(&self.y, &self.z))
        {
            return Err(Error::InvalidQuery(format!(
                "vertex `{}` appears in more than one of X, Y, Z",
                g.name(v)
            )));
        }
        Ok(())
    }
}

/// True iff `Z` separates `X` from `Y` in the augmented extended subgraph
/// `(G[X ∪ Y ∪ Z])^a`.
pub fn p_separated_aug(g: &ChainGraph, q: &SeparationQuery) -> Result<bool> {
    q.validate(g)?;
    Ok(separated(g, &q.x, &q.y, &q.z))
}

/// Unchecked core of [`p_separated_aug`]; the sets must be valid and disjoint.
pub(crate) fn separated(g: &ChainGraph, x: &VertexSet, y: &VertexSet, z: &VertexSet) -> bool {
    let all: VertexSet = x.iter().chain(y).chain(z).copied().collect();
    let an = g.ancestral_mask(&all);
    let co = g.coherent_mask(&an);
    let aug = g.augmented_view(&an, &co);
    let blocked = set_to_mask(z, g.n());
    !reaches(&aug, x, y, &blocked)
}

/// BFS over adjacency lists from `from`, never entering `blocked`; true iff a
/// vertex of `to` is reached.
pub(crate) fn reaches(
    adj: &[Vec<Vertex>],
    from: &VertexSet,
    to: &VertexSet,
    blocked: &[bool],
) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut queue: std::collections::VecDeque<Vertex> = from.iter().copied().collect();
    for &s in from {
        seen[s] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if to.contains(&w) {
                return true;
            }
            if !seen[w] && !blocked[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}
