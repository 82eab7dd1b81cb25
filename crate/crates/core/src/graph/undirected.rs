use std::collections::VecDeque;
use std::fmt;

use super::{Vertex, VertexSet};

/// Simple undirected graph over an ordered, named vertex set.
#[derive(Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    names: Vec<String>,
    adj: Vec<Vec<Vertex>>,
}

impl UndirectedGraph {
    /// Edgeless graph on `names`.
    pub fn new(names: Vec<String>) -> Self {
        let n = names.len();
        UndirectedGraph {
            names,
            adj: vec![Vec::new(); n],
        }
    }

    /// Complete graph on `names`.
    pub fn complete(names: Vec<String>) -> Self {
        let n = names.len();
        let adj = (0..n)
            .map(|v| (0..n).filter(|&w| w != v).collect())
            .collect();
        UndirectedGraph { names, adj }
    }

    /// Builds from adjacency lists, which must be symmetric.
    pub(crate) fn from_lists(names: Vec<String>, mut adj: Vec<Vec<Vertex>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        UndirectedGraph { names, adj }
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn add_edge(&mut self, a: Vertex, b: Vertex) {
        assert!(a != b, "self-loop");
        if let Err(pos) = self.adj[a].binary_search(&b) {
            self.adj[a].insert(pos, b);
            let pos = self.adj[b].binary_search(&a).unwrap_err();
            self.adj[b].insert(pos, a);
        }
    }

    pub fn remove_edge(&mut self, a: Vertex, b: Vertex) {
        if let Ok(pos) = self.adj[a].binary_search(&b) {
            self.adj[a].remove(pos);
            let pos = self.adj[b].binary_search(&a).unwrap();
            self.adj[b].remove(pos);
        }
    }

    /// Edges `(a, b)` with `a < b`, in index order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.n())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges by name, in index order.
    pub fn edge_names(&self) -> Vec<(&str, &str)> {
        self.edges()
            .into_iter()
            .map(|(a, b)| (self.name(a), self.name(b)))
            .collect()
    }

    /// True iff `a` and `b` are connected by a path avoiding `blocked`.
    /// `a` and `b` themselves must not be in `blocked`.
    pub fn connected_avoiding(&self, a: Vertex, b: Vertex, blocked: &[bool]) -> bool {
        if a == b {
            return true;
        }
        let mut seen = vec![false; self.n()];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if w == b {
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

    /// Vertices reachable from `start` without entering `blocked`.
    pub fn reachable_avoiding(&self, start: &VertexSet, blocked: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        let mut queue: VecDeque<Vertex> = start.iter().copied().collect();
        for &s in start {
            seen[s] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] && !blocked[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Same graph with vertices renamed/reordered to `names`, or `None` if the
    /// vertex sets differ.
    pub fn reindexed<S: AsRef<str>>(&self, names: &[S]) -> Option<UndirectedGraph> {
        if names.len() != self.n() {
            return None;
        }
        let pos: std::collections::HashMap<&str, Vertex> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_ref(), i))
            .collect();
        let map: Vec<Vertex> = self
            .names
            .iter()
            .map(|s| pos.get(s.as_str()).copied())
            .collect::<Option<_>>()?;
        let mut out = UndirectedGraph::new(names.iter().map(|s| s.as_ref().to_string()).collect());
        for (a, b) in self.edges() {
            out.add_edge(map[a], map[b]);
        }
        Some(out)
    }
}

impl fmt::Debug for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edge_names()
            .into_iter()
            .map(|(a, b)| format!("{a}--{b}"))
            .collect();
        write!(f, "UndirectedGraph {{ [{}] {} }}", self.names.join(","), edges.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path4() -> UndirectedGraph {
        let mut g = UndirectedGraph::new(["a", "b", "c", "d"].map(String::from).to_vec());
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 3);
        g
    }

    #[test]
    fn edge_bookkeeping() {
        let mut g = path4();
        assert_eq!(g.edge_count(), 3);
        g.add_edge(1, 0);
        assert_eq!(g.edge_count(), 3);
        g.remove_edge(2, 1);
        assert_eq!(g.edges(), vec![(0, 1), (2, 3)]);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn blocked_reachability() {
        let g = path4();
        let mut blocked = vec![false; 4];
        assert!(g.connected_avoiding(0, 3, &blocked));
        blocked[2] = true;
        assert!(!g.connected_avoiding(0, 3, &blocked));
        assert!(g.connected_avoiding(0, 1, &blocked));
    }

    #[test]
    fn reindex_preserves_edges() {
        let g = path4();
        let h = g.reindexed(&["d", "c", "b", "a"]).unwrap();
        assert_eq!(h.edges(), vec![(0, 1), (1, 2), (2, 3)]);
        assert!(g.reindexed(&["a", "b"]).is_none());
        assert_eq!(UndirectedGraph::complete(path4().names().to_vec()).edge_count(), 6);
    }
}
