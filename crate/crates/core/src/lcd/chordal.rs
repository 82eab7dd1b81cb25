use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{UndirectedGraph, Vertex, VertexSet};

/// Maximum cardinality search from vertex 0, ties broken by smallest index.
/// Returns the visit order.
fn mcs(g: &UndirectedGraph) -> Vec<Vertex> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !done[v])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("a vertex remains");
        done[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !done[w] {
                weight[w] += 1;
            }
        }
    }
    order
}

/// Chordal supergraph: eliminates vertices in reverse maximum-cardinality
/// order, joining the remaining neighbours of each eliminated vertex.
pub fn triangulate(g: &UndirectedGraph) -> UndirectedGraph {
    let order = mcs(g);
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut out = g.clone();
    for &v in order.iter().rev() {
        let earlier: Vec<Vertex> = out.neighbors(v).iter().copied().filter(|&w| pos[w] < pos[v]).collect();
        for (i, &a) in earlier.iter().enumerate() {
            for &b in &earlier[i + 1..] {
                out.add_edge(a, b);
            }
        }
    }
    out
}

/// True iff `g` is chordal.
pub fn is_chordal(g: &UndirectedGraph) -> bool {
    perfect_cliques(g).is_some()
}

/// For each vertex in visit order, the vertex with its earlier-visited
/// neighbours; `None` unless the visit order is a perfect elimination order.
fn perfect_cliques(g: &UndirectedGraph) -> Option<Vec<VertexSet>> {
    let order = mcs(g);
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut sets = Vec::with_capacity(order.len());
    for &v in &order {
        let earlier: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| pos[w] < pos[v]).collect();
        for (i, &a) in earlier.iter().enumerate() {
            if earlier[i + 1..].iter().any(|&b| !g.has_edge(a, b)) {
                return None;
            }
        }
        let mut c: VertexSet = earlier.into_iter().collect();
        c.insert(v);
        sets.push(c);
    }
    Some(sets)
}

/// An edge of a separation tree with its separator `nodes[i] ∩ nodes[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub i: usize,
    pub j: usize,
    pub sep: VertexSet,
}

/// A tree over vertex sets whose edge separators split the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationTree {
    pub nodes: Vec<VertexSet>,
    pub edges: Vec<TreeEdge>,
}

impl SeparationTree {
    /// Tree nodes adjacent to node `i`, with the connecting separators.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, &VertexSet)> {
        self.edges.iter().filter_map(move |e| {
            if e.i == i {
                Some((e.j, &e.sep))
            } else if e.j == i {
                Some((e.i, &e.sep))
            } else {
                None
            }
        })
    }

    /// Separators on the tree path between the closest pair of nodes
    /// containing `x` and `y` respectively, starting from the `x` side.
    /// Empty when some node contains both.
    pub fn path_separators(&self, x: Vertex, y: Vertex) -> Vec<VertexSet> {
        let k = self.nodes.len();
        let mut prev: Vec<Option<usize>> = vec![None; k];
        let mut seen = vec![false; k];
        let mut queue: std::collections::VecDeque<usize> =
            (0..k).filter(|&i| self.nodes[i].contains(&x)).collect();
        for &i in &queue {
            seen[i] = true;
        }
        while let Some(i) = queue.pop_front() {
            if self.nodes[i].contains(&y) {
                let mut seps = Vec::new();
                let mut cur = i;
                while let Some(p) = prev[cur] {
                    seps.push(self.nodes[p].intersection(&self.nodes[cur]).copied().collect());
                    cur = p;
                }
                seps.reverse();
                return seps;
            }
            for (j, _) in self.neighbors(i) {
                if !seen[j] {
                    seen[j] = true;
                    prev[j] = Some(i);
                    queue.push_back(j);
                }
            }
        }
        Vec::new()
    }

    /// True iff every vertex's nodes form a connected subtree.
    pub fn has_running_intersection(&self, n: usize) -> bool {
        (0..n).all(|v| {
            let holders: Vec<usize> = (0..self.nodes.len()).filter(|&i| self.nodes[i].contains(&v)).collect();
            let Some(&start) = holders.first() else {
                return true;
            };
            let mut seen = vec![false; self.nodes.len()];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for (j, _) in self.neighbors(i) {
                    if !seen[j] && self.nodes[j].contains(&v) {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            holders.iter().all(|&i| seen[i])
        })
    }

    /// JSON form with vertex names.
    pub fn to_json(&self, names: &[String]) -> serde_json::Value {
        let set = |s: &VertexSet| s.iter().map(|&v| names[v].clone()).collect::<Vec<_>>();
        serde_json::json!({
            "nodes": self.nodes.iter().map(set).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| serde_json::json!({"i": e.i, "j": e.j, "sep": set(&e.sep)})).collect::<Vec<_>>(),
        })
    }
}

/// Junction tree of a chordal graph: its maximal cliques, in the order the
/// search completes them, joined by a maximum-weight spanning tree on
/// separator sizes. Ties go to the pair with smaller node indices.
pub fn junction_tree(g: &UndirectedGraph) -> Result<SeparationTree> {
    let sets = perfect_cliques(g).ok_or(Error::NotChordal)?;
    let nodes: Vec<VertexSet> = sets
        .iter()
        .enumerate()
        .filter(|(i, c)| !sets.iter().enumerate().any(|(j, d)| j != *i && c.is_subset(d) && (c.len() < d.len() || j < *i)))
        .map(|(_, c)| c.clone())
        .collect();
    let mut candidates = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let sep: VertexSet = nodes[i].intersection(&nodes[j]).copied().collect();
            candidates.push(TreeEdge { i, j, sep });
        }
    }
    candidates.sort_by(|a, b| b.sep.len().cmp(&a.sep.len()).then((a.i, a.j).cmp(&(b.i, b.j))));
    let mut root: Vec<usize> = (0..nodes.len()).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    let mut edges = Vec::new();
    for e in candidates {
        let (a, b) = (find(&mut root, e.i), find(&mut root, e.j));
        if a != b {
            root[a] = b;
            edges.push(e);
        }
    }
    Ok(SeparationTree { nodes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ChainGraph;
    use crate::separation::tests::SIX_NODE;

    fn cycle(n: usize) -> UndirectedGraph {
        let mut g = UndirectedGraph::new((0..n).map(|i| format!("v{i}")).collect());
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    #[test]
    fn six_triangulation_and_tree() {
        let g: ChainGraph = SIX_NODE.parse().unwrap();
        let aug = g.augment();
        assert!(!is_chordal(&aug));
        let t = triangulate(&aug);
        assert_eq!(t.edge_count(), aug.edge_count() + 1);
        assert!(t.has_edge(1, 2), "chord b - c");
        let tree = junction_tree(&t).unwrap();
        let sets = |list: &[&[usize]]| list.iter().map(|s| s.iter().copied().collect::<VertexSet>()).collect::<Vec<_>>();
        assert_eq!(tree.nodes, sets(&[&[0, 1, 2], &[1, 2, 3], &[2, 3, 4], &[4, 5]]));
        let seps: Vec<VertexSet> = tree.edges.iter().map(|e| e.sep.clone()).collect();
        assert_eq!(seps, sets(&[&[1, 2], &[2, 3], &[4]]));
        assert!(tree.has_running_intersection(6));
        assert_eq!(
            tree.to_json(g.names())["edges"][0],
            serde_json::json!({"i": 0, "j": 1, "sep": ["b", "c"]})
        );
    }

    #[test]
    fn cycles_and_trivial_inputs() {
        let t = triangulate(&cycle(5));
        assert_eq!(t.edge_count(), 7);
        assert!(is_chordal(&t));
        let k = UndirectedGraph::complete((0..4).map(|i| i.to_string()).collect());
        assert_eq!(triangulate(&k), k);
        let tree = junction_tree(&k).unwrap();
        assert_eq!(tree.nodes.len(), 1);
        assert!(tree.edges.is_empty());
        assert!(matches!(junction_tree(&cycle(4)), Err(Error::NotChordal)));
    }

    #[test]
    fn two_cliques_share_a_vertex() {
        let mut g = UndirectedGraph::new(["a", "b", "c"].map(String::from).to_vec());
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        let tree = junction_tree(&g).unwrap();
        assert_eq!(tree.nodes.len(), 2);
        assert_eq!(tree.edges[0].sep, VertexSet::from([1]));
        assert_eq!(tree.path_separators(0, 2), vec![VertexSet::from([1])]);
        assert!(tree.path_separators(0, 1).is_empty());
    }

    #[test]
    fn disconnected_graphs_get_empty_separators() {
        let g = UndirectedGraph::new(["a", "b"].map(String::from).to_vec());
        let tree = junction_tree(&g).unwrap();
        assert_eq!(tree.nodes.len(), 2);
        assert_eq!(tree.edges, vec![TreeEdge { i: 0, j: 1, sep: VertexSet::new() }]);
    }

    #[test]
    fn random_triangulations_are_chordal_trees() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let n = rng.random_range(1..12);
            let mut g = UndirectedGraph::new((0..n).map(|i| format!("v{i}")).collect());
            for a in 0..n {
                for b in a + 1..n {
                    if rng.random_bool(0.3) {
                        g.add_edge(a, b);
                    }
                }
            }
            let t = triangulate(&g);
            assert!(is_chordal(&t));
            assert!(g.edges().iter().all(|&(a, b)| t.has_edge(a, b)));
            let tree = junction_tree(&t).unwrap();
            assert_eq!(tree.edges.len() + 1, tree.nodes.len());
            assert!(tree.has_running_intersection(n));
            // Every edge lies in some node.
            assert!(t.edges().iter().all(|&(a, b)| tree.nodes.iter().any(|c| c.contains(&a) && c.contains(&b))));
        }
    }
}
