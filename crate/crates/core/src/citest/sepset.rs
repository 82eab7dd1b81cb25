use std::collections::BTreeMap;

use crate::graph::{Vertex, VertexSet};

/// Separating sets recorded for removed edges, keyed by unordered pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SepSetMap {
    sets: BTreeMap<(Vertex, Vertex), VertexSet>,
}

impl SepSetMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `S_uv = S_vu = s`, replacing any earlier set.
    pub fn insert(&mut self, u: Vertex, v: Vertex, s: VertexSet) {
        debug_assert!(!s.contains(&u) && !s.contains(&v));
        self.sets.insert((u.min(v), u.max(v)), s);
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Option<&VertexSet> {
        self.sets.get(&(u.min(v), u.max(v)))
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        self.get(u, v).is_some()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Entries `((u, v), S)` with `u < v`, in order.
    pub fn iter(&self) -> impl Iterator<Item = (&(Vertex, Vertex), &VertexSet)> {
        self.sets.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_lookup() {
        let mut m = SepSetMap::new();
        m.insert(3, 1, [0].into());
        assert_eq!(m.get(1, 3), Some(&[0].into()));
        assert_eq!(m.get(3, 1), Some(&[0].into()));
        assert!(!m.contains(0, 1));
        m.insert(1, 3, VertexSet::new());
        assert_eq!(m.len(), 1);
        assert!(m.get(3, 1).unwrap().is_empty());
    }
}
