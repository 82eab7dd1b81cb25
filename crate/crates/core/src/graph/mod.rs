//! Mixed graphs with directed and undirected edges, read as AMP chain graphs.
//!
//! Vertices are identified by index into the graph's ordered name list. The
//! order of the names is the canonical variable order used by every
//! order-sensitive algorithm in the crate.

mod text;
mod undirected;

pub use undirected::UndirectedGraph;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Vertex index.
pub type Vertex = usize;
/// Ordered vertex set.
pub type VertexSet = BTreeSet<Vertex>;

/// Relation between an ordered pair of vertices `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    Absent,
    /// `a -> b`
    Out,
    /// `b -> a`
    In,
    /// `a -- b`
    Undirected,
}

impl Link {
    fn reversed(self) -> Link {
        match self {
            Link::Out => Link::In,
            Link::In => Link::Out,
            other => other,
        }
    }
}

/// A triplex `({x, z}, middle)`: the induced subgraph over the three vertices
/// is `x -> m -- z`, `x -> m <- z` or `x -- m <- z`, with `x` and `z`
/// non-adjacent. Endpoints are stored with `x < z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triplex {
    pub x: Vertex,
    pub z: Vertex,
    pub middle: Vertex,
}

impl Triplex {
    pub fn new(a: Vertex, middle: Vertex, b: Vertex) -> Self {
        Triplex {
            x: a.min(b),
            z: a.max(b),
            middle,
        }
    }
}

/// A graph with directed and undirected edges over a fixed, ordered vertex set.
#[derive(Clone)]
pub struct ChainGraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    links: Vec<Link>,
    parents: Vec<Vec<Vertex>>,
    children: Vec<Vec<Vertex>>,
    neighbors: Vec<Vec<Vertex>>,
}

fn insert_sorted(list: &mut Vec<Vertex>, v: Vertex) {
    if let Err(pos) = list.binary_search(&v) {
        list.insert(pos, v);
    }
}

fn remove_sorted(list: &mut Vec<Vertex>, v: Vertex) {
    if let Ok(pos) = list.binary_search(&v) {
        list.remove(pos);
    }
}

impl ChainGraph {
    /// Empty graph over the given vertex names, in order.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let n = names.len();
        Ok(ChainGraph {
            names,
            index,
            links: vec![Link::Absent; n * n],
            parents: vec![Vec::new(); n],
            children: vec![Vec::new(); n],
            neighbors: vec![Vec::new(); n],
        })
    }

    /// Empty graph on `n` vertices named `x0 .. x{n-1}`.
    pub fn with_size(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("x{i}"))).expect("generated names are distinct")
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

    pub fn index_of(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied()
    }

    /// Looks up a vertex by name.
    pub fn vertex(&self, name: &str) -> Result<Vertex> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Resolves a list of names into a vertex set.
    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        names.iter().map(|s| self.vertex(s.as_ref())).collect()
    }

    pub fn set_names(&self, set: &VertexSet) -> Vec<&str> {
        set.iter().map(|&v| self.name(v)).collect()
    }

    pub fn link(&self, a: Vertex, b: Vertex) -> Link {
        self.links[a * self.n() + b]
    }

    pub fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        self.link(a, b) != Link::Absent
    }

    pub fn parents(&self, v: Vertex) -> &[Vertex] {
        &self.parents[v]
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    /// Vertices joined to `v` by an undirected edge.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[v]
    }

    /// All vertices adjacent to `v` by any edge, ascending.
    pub fn adjacencies(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.parents[v]
            .iter()
            .chain(&self.children[v])
            .chain(&self.neighbors[v])
            .copied()
            .collect();
        out.sort_unstable();
        out
    }

    fn check_pair(&self, a: Vertex, b: Vertex) -> Result<()> {
        if a >= self.n() {
            return Err(Error::UnknownVertex(format!("#{a}")));
        }
        if b >= self.n() {
            return Err(Error::UnknownVertex(format!("#{b}")));
        }
        if a == b {
            return Err(Error::SelfLoop(self.names[a].clone()));
        }
        Ok(())
    }

    fn set_link(&mut self, a: Vertex, b: Vertex, link: Link) {
        let n = self.n();
        self.links[a * n + b] = link;
        self.links[b * n + a] = link.reversed();
    }

    /// Adds `a -> b`. Re-adding an existing identical edge is a no-op.
    pub fn add_directed(&mut self, a: Vertex, b: Vertex) -> Result<()> {
        self.check_pair(a, b)?;
        match self.link(a, b) {
            Link::Out => Ok(()),
            Link::Absent => {
                self.set_link(a, b, Link::Out);
                insert_sorted(&mut self.children[a], b);
                insert_sorted(&mut self.parents[b], a);
                Ok(())
            }
            _ => Err(Error::EdgeConflict(
                self.names[a].clone(),
                self.names[b].clone(),
            )),
        }
    }

    /// Adds `a -- b`. Re-adding an existing identical edge is a no-op.
    pub fn add_undirected(&mut self, a: Vertex, b: Vertex) -> Result<()> {
        self.check_pair(a, b)?;
        match self.link(a, b) {
            Link::Undirected => Ok(()),
            Link::Absent => {
                self.set_link(a, b, Link::Undirected);
                insert_sorted(&mut self.neighbors[a], b);
                insert_sorted(&mut self.neighbors[b], a);
                Ok(())
            }
            _ => Err(Error::EdgeConflict(
                self.names[a].clone(),
                self.names[b].clone(),
            )),
        }
    }

    /// Removes whatever edge joins `a` and `b`.
    pub fn remove_edge(&mut self, a: Vertex, b: Vertex) {
        match self.link(a, b) {
            Link::Absent => return,
            Link::Out => {
                remove_sorted(&mut self.children[a], b);
                remove_sorted(&mut self.parents[b], a);
            }
            Link::In => {
                remove_sorted(&mut self.children[b], a);
                remove_sorted(&mut self.parents[a], b);
            }
            Link::Undirected => {
                remove_sorted(&mut self.neighbors[a], b);
                remove_sorted(&mut self.neighbors[b], a);
            }
        }
        self.set_link(a, b, Link::Absent);
    }

    /// Directed edges `(a, b)` meaning `a -> b`, in index order.
    pub fn directed_edges(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.n())
            .flat_map(|a| self.children[a].iter().map(move |&b| (a, b)))
            .collect()
    }

    /// Undirected edges `(a, b)` with `a < b`, in index order.
    pub fn undirected_edges(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.n())
            .flat_map(|a| {
                self.neighbors[a]
                    .iter()
                    .filter(move |&&b| b > a)
                    .map(move |&b| (a, b))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.directed_edges().len() + self.undirected_edges().len()
    }

    /// Copy of the graph with the vertices renamed/reordered to `names`; every
    /// name must already exist. Used to compare graphs whose vertex order differs.
    pub fn reindexed<S: AsRef<str>>(&self, names: &[S]) -> Result<ChainGraph> {
        if names.len() != self.n() {
            return Err(Error::VertexMismatch);
        }
        let mut out = ChainGraph::new(names.iter().map(|s| s.as_ref().to_string()))?;
        let map: Vec<Vertex> = self
            .names
            .iter()
            .map(|name| out.index_of(name).ok_or(Error::VertexMismatch))
            .collect::<Result<_>>()?;
        for (a, b) in self.directed_edges() {
            out.add_directed(map[a], map[b])?;
        }
        for (a, b) in self.undirected_edges() {
            out.add_undirected(map[a], map[b])?;
        }
        Ok(out)
    }

    /// Connected components of the undirected part, each sorted, ordered by
    /// smallest member.
    pub fn chain_components(&self) -> Vec<Vec<Vertex>> {
        let comp = self.component_ids();
        let count = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Component id per vertex; ids are numbered by smallest member.
    pub fn component_ids(&self) -> Vec<usize> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in &self.neighbors[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// True iff the graph has no partially directed cycle: no directed edge
    /// inside a chain component and an acyclic component quotient.
    pub fn is_amp_cg(&self) -> bool {
        self.component_order().is_some()
    }

    /// Topological order of chain components, or `None` if the quotient
    /// graph has a cycle.
    pub fn component_order(&self) -> Option<Vec<Vec<Vertex>>> {
        let comp = self.component_ids();
        let components = self.chain_components();
        let k = components.len();
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
        for (a, b) in self.directed_edges() {
            if comp[a] == comp[b] {
                return None;
            }
            succ[comp[a]].insert(comp[b]);
        }
        let mut indeg = vec![0usize; k];
        for s in &succ {
            for &t in s {
                indeg[t] += 1;
            }
        }
        // Kahn's algorithm, always taking the lowest ready component.
        let mut ready: BTreeSet<usize> = (0..k).filter(|&c| indeg[c] == 0).collect();
        let mut order = Vec::with_capacity(k);
        while let Some(c) = ready.pop_first() {
            order.push(c);
            for &t in &succ[c] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.insert(t);
                }
            }
        }
        if order.len() != k {
            return None;
        }
        Some(order.into_iter().map(|c| components[c].clone()).collect())
    }

    fn closure_mask(&self, seed: &VertexSet, follow_neighbors: bool) -> Vec<bool> {
        let mut mark = vec![false; self.n()];
        let mut stack: Vec<Vertex> = seed.iter().copied().collect();
        for &v in seed {
            mark[v] = true;
        }
        while let Some(v) = stack.pop() {
            let back = self.parents[v].iter();
            let side = if follow_neighbors {
                self.neighbors[v].as_slice()
            } else {
                &[]
            };
            for &w in back.chain(side) {
                if !mark[w] {
                    mark[w] = true;
                    stack.push(w);
                }
            }
        }
        mark
    }

    pub(crate) fn ancestral_mask(&self, set: &VertexSet) -> Vec<bool> {
        self.closure_mask(set, false)
    }

    pub(crate) fn anterior_mask(&self, set: &VertexSet) -> Vec<bool> {
        self.closure_mask(set, true)
    }

    pub(crate) fn coherent_mask(&self, mask: &[bool]) -> Vec<bool> {
        let comp = self.component_ids();
        let k = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut hit = vec![false; k];
        for (v, &m) in mask.iter().enumerate() {
            if m {
                hit[comp[v]] = true;
            }
        }
        comp.iter().map(|&c| hit[c]).collect()
    }

    /// `An(A)`: `A` together with all its ancestors.
    pub fn ancestral_closure(&self, set: &VertexSet) -> VertexSet {
        mask_to_set(&self.ancestral_mask(set))
    }

    /// `ant(A)`: every vertex with a chain into `A` whose directed edges all
    /// point towards `A`; includes `A`.
    pub fn anterior(&self, set: &VertexSet) -> VertexSet {
        mask_to_set(&self.anterior_mask(set))
    }

    /// `Co(A)`: union of the chain components meeting `A`.
    pub fn coherent_closure(&self, set: &VertexSet) -> VertexSet {
        mask_to_set(&self.coherent_mask(&set_to_mask(set, self.n())))
    }

    /// Boundary `bd(A)`: parents and neighbours of `A` outside `A`.
    pub fn boundary(&self, set: &VertexSet) -> VertexSet {
        set.iter()
            .flat_map(|&v| self.parents[v].iter().chain(&self.neighbors[v]))
            .filter(|w| !set.contains(w))
            .copied()
            .collect()
    }

    /// Subgraph induced by `set`, keeping the original vertex order.
    pub fn induced(&self, set: &VertexSet) -> ChainGraph {
        let mask = set_to_mask(set, self.n());
        self.view_graph(&mask, &mask)
    }

    /// `G[A]`: the subgraph induced by `An(A)` together with the undirected
    /// edges inside `Co(An(A))`.
    pub fn extended_subgraph(&self, set: &VertexSet) -> ChainGraph {
        let an = self.ancestral_mask(set);
        let co = self.coherent_mask(&an);
        self.view_graph(&an, &co)
    }

    /// Graph on the vertices of `co` keeping directed edges inside `an` and
    /// undirected edges inside `co`.
    fn view_graph(&self, an: &[bool], co: &[bool]) -> ChainGraph {
        let keep: Vec<Vertex> = (0..self.n()).filter(|&v| co[v] || an[v]).collect();
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let mut out = ChainGraph::new(keep.iter().map(|&v| self.names[v].clone()))
            .expect("names are distinct");
        for (a, b) in self.directed_edges() {
            if an[a] && an[b] {
                out.add_directed(pos[a], pos[b]).expect("valid edge");
            }
        }
        for (a, b) in self.undirected_edges() {
            if co[a] && co[b] {
                out.add_undirected(pos[a], pos[b]).expect("valid edge");
            }
        }
        out
    }

    /// Adjacency lists of the augmented graph of the view that keeps directed
    /// edges inside `an` and undirected edges inside `co`. Vertices outside
    /// the view get empty lists.
    pub(crate) fn augmented_view(&self, an: &[bool], co: &[bool]) -> Vec<Vec<Vertex>> {
        let n = self.n();
        let mut adj = vec![false; n * n];
        let pa = |v: Vertex| -> &[Vertex] {
            if an[v] {
                &self.parents[v]
            } else {
                &[]
            }
        };
        let ne = |v: Vertex| -> &[Vertex] {
            if co[v] {
                &self.neighbors[v]
            } else {
                &[]
            }
        };
        let join = |adj: &mut Vec<bool>, a: Vertex, b: Vertex| {
            adj[a * n + b] = true;
            adj[b * n + a] = true;
        };
        for v in 0..n {
            for &p in pa(v) {
                join(&mut adj, p, v);
            }
            for &w in ne(v) {
                join(&mut adj, v, w);
            }
        }
        let skeleton = adj.clone();
        for m in 0..n {
            let parents = pa(m);
            if parents.is_empty() {
                continue;
            }
            // Triplexes: x -> m <- z or x -> m -- z with x, z non-adjacent.
            for (i, &x) in parents.iter().enumerate() {
                for &z in parents[i + 1..].iter().chain(ne(m)) {
                    if x != z && !skeleton[x * n + z] {
                        join(&mut adj, x, z);
                    }
                }
            }
        }
        // Bi-flags: x -> a -- b <- y.
        for a in 0..n {
            for &b in ne(a) {
                if b < a {
                    continue;
                }
                for &x in pa(a) {
                    for &y in pa(b) {
                        if x != y {
                            join(&mut adj, x, y);
                        }
                    }
                }
            }
        }
        (0..n)
            .map(|v| (0..n).filter(|&w| adj[v * n + w]).collect())
            .collect()
    }

    /// The augmented graph `G^a`: every triplex and bi-flag augmented, all
    /// orientations dropped.
    pub fn augment(&self) -> UndirectedGraph {
        let all = vec![true; self.n()];
        let lists = self.augmented_view(&all, &all);
        UndirectedGraph::from_lists(self.names.clone(), lists)
    }

    /// All triplexes, sorted.
    pub fn triplexes(&self) -> Vec<Triplex> {
        let mut out = BTreeSet::new();
        for m in 0..self.n() {
            let parents = &self.parents[m];
            for (i, &x) in parents.iter().enumerate() {
                for &z in parents[i + 1..].iter().chain(&self.neighbors[m]) {
                    if !self.adjacent(x, z) {
                        out.insert(Triplex::new(x, m, z));
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Flags: induced `x -> m -- z`. Reported as triplexes whose
    /// first-listed endpoint `x` is the parent.
    pub fn flags(&self) -> Vec<(Vertex, Vertex, Vertex)> {
        let mut out = Vec::new();
        for m in 0..self.n() {
            for &x in &self.parents[m] {
                for &z in &self.neighbors[m] {
                    if !self.adjacent(x, z) {
                        out.push((x, m, z));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Orientation-free copy.
    pub fn skeleton(&self) -> UndirectedGraph {
        let lists = (0..self.n()).map(|v| self.adjacencies(v)).collect();
        UndirectedGraph::from_lists(self.names.clone(), lists)
    }
}

/// True iff the graphs have the same skeleton and the same triplexes.
/// Vertex sets must agree by name; order may differ.
pub fn triplex_equivalent(g: &ChainGraph, h: &ChainGraph) -> Result<bool> {
    let h = if g.names() == h.names() {
        h.clone()
    } else {
        h.reindexed(g.names())?
    };
    Ok(g.skeleton() == h.skeleton() && g.triplexes() == h.triplexes())
}

pub(crate) fn set_to_mask(set: &VertexSet, n: usize) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in set {
        mask[v] = true;
    }
    mask
}

pub(crate) fn mask_to_set(mask: &[bool]) -> VertexSet {
    mask.iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(v, _)| v)
        .collect()
}

impl PartialEq for ChainGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.links == other.links
    }
}

impl Eq for ChainGraph {}

impl fmt::Debug for ChainGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainGraph {{ {} }}", self.to_text().trim_end().replace('\n', "; "))
    }
}
