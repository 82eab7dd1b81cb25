use rayon::prelude::*;
use serde::Serialize;

use crate::citest::{CiSource, SepSetMap};
use crate::error::Result;
use crate::graph::{UndirectedGraph, Vertex, VertexSet};

/// How candidate conditioning sets are formed during a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Adjacencies are read from the current graph, so removals within a
    /// level change later candidate sets. Candidates for `(u, v)` are
    /// `ad(u) ∪ ad(ad(u) \ {v})` minus `u, v`.
    Original,
    /// Candidates `ad(u) ∪ ad(ad(u))` minus `u, v` are frozen at the start
    /// of each level; removals only take effect at the next level.
    Stable,
}

/// One tested ordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub level: usize,
    pub u: Vertex,
    pub v: Vertex,
    pub candidates: VertexSet,
    /// The separating set found, if any; the edge was removed iff present.
    pub sepset: Option<VertexSet>,
}

/// Per-level summary of a skeleton search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub level: usize,
    pub pairs_tested: usize,
    pub removed: usize,
}

/// Result of a skeleton phase.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub graph: UndirectedGraph,
    pub sepsets: SepSetMap,
    pub levels: Vec<LevelStats>,
    /// Every tested ordered pair in scan order; empty unless requested.
    pub trace: Vec<TraceEntry>,
}

impl Skeleton {
    /// Largest conditioning-set size at which any pair was tested.
    pub fn max_level(&self) -> Option<usize> {
        self.levels.iter().filter(|l| l.pairs_tested > 0).map(|l| l.level).last()
    }
}

/// Settings shared by every skeleton search.
#[derive(Debug, Clone)]
pub(crate) struct SearchSpec<'a> {
    /// Vertices taking part, in the variable order.
    pub order: &'a [Vertex],
    pub mode: SearchMode,
    pub max_level: Option<usize>,
    pub parallel: bool,
    pub trace: bool,
}

/// Adjacency matrix over all vertices of the source.
#[derive(Debug, Clone)]
pub(crate) struct Adjacency {
    n: usize,
    m: Vec<bool>,
}

impl Adjacency {
    pub fn empty(n: usize) -> Self {
        Adjacency { n, m: vec![false; n * n] }
    }

    /// Complete graph over `vertices`.
    pub fn complete(n: usize, vertices: &[Vertex]) -> Self {
        let mut a = Self::empty(n);
        for (i, &x) in vertices.iter().enumerate() {
            for &y in &vertices[i + 1..] {
                a.set(x, y, true);
            }
        }
        a
    }

    pub fn from_graph(g: &UndirectedGraph) -> Self {
        let mut a = Self::empty(g.n());
        for (x, y) in g.edges() {
            a.set(x, y, true);
        }
        a
    }

    pub fn has(&self, x: Vertex, y: Vertex) -> bool {
        self.m[x * self.n + y]
    }

    pub fn set(&mut self, x: Vertex, y: Vertex, on: bool) {
        self.m[x * self.n + y] = on;
        self.m[y * self.n + x] = on;
    }

    pub fn neighbors<'s>(&'s self, x: Vertex, order: &'s [Vertex]) -> impl Iterator<Item = Vertex> + 's {
        order.iter().copied().filter(move |&y| self.has(x, y))
    }

    pub fn to_graph(&self, names: &[String]) -> UndirectedGraph {
        let mut g = UndirectedGraph::new(names.to_vec());
        for x in 0..self.n {
            for y in x + 1..self.n {
                if self.has(x, y) {
                    g.add_edge(x, y);
                }
            }
        }
        g
    }
}

/// `ad(u) ∪ ad(ad(u) \ {skip})` minus `u` and `skip`, in the order of `order`.
pub(crate) fn two_step(adj: &Adjacency, u: Vertex, skip: Option<Vertex>, order: &[Vertex]) -> Vec<Vertex> {
    let mut mark = vec![false; adj.n];
    for w in adj.neighbors(u, order) {
        mark[w] = true;
        if Some(w) != skip {
            for x in adj.neighbors(w, order) {
                mark[x] = true;
            }
        }
    }
    mark[u] = false;
    if let Some(s) = skip {
        mark[s] = false;
    }
    order.iter().copied().filter(|&w| mark[w]).collect()
}

/// Calls `test` on the `k`-subsets of `items` in lexicographic order of
/// positions and returns the first accepted subset.
pub(crate) fn first_subset<F>(items: &[Vertex], k: usize, mut test: F) -> Result<Option<VertexSet>>
where
    F: FnMut(&VertexSet) -> Result<bool>,
{
    if k > items.len() {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let s: VertexSet = idx.iter().map(|&i| items[i]).collect();
        if test(&s)? {
            return Ok(Some(s));
        }
        if !next_combination(&mut idx, items.len()) {
            return Ok(None);
        }
    }
}

/// Steps `idx` to the next `idx.len()`-combination of `0..n` in
/// lexicographic order; false after the last one.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut pos = k;
    while pos > 0 {
        pos -= 1;
        if idx[pos] < n - k + pos {
            idx[pos] += 1;
            for j in pos + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

struct PairOutcome {
    trace: Vec<TraceEntry>,
    tested: usize,
    sepset: Option<VertexSet>,
}

/// Tests `(u, v)` at one level; `None` when the pair is not eligible.
fn test_pair(
    src: &CiSource,
    level: usize,
    u: Vertex,
    v: Vertex,
    candidates: Vec<Vertex>,
    trace: bool,
) -> Result<Option<(Option<VertexSet>, Option<TraceEntry>)>> {
    if candidates.len() < level {
        return Ok(None);
    }
    let sepset = first_subset(&candidates, level, |s| src.independent(u, v, s))?;
    let entry = trace.then(|| TraceEntry {
        level,
        u,
        v,
        candidates: candidates.iter().copied().collect(),
        sepset: sepset.clone(),
    });
    Ok(Some((sepset, entry)))
}

/// Level-wise edge removal starting from `adj`, restricted to `spec.order`.
pub(crate) fn search(src: &CiSource, mut adj: Adjacency, spec: &SearchSpec) -> Result<Skeleton> {
    let order = spec.order;
    let mut sepsets = SepSetMap::new();
    let mut levels = Vec::new();
    let mut trace = Vec::new();
    let top = order.len().saturating_sub(2);
    let top = [spec.max_level, src.max_conditioning()]
        .into_iter()
        .flatten()
        .fold(top, usize::min);
    for level in 0..=top {
        let (tested, removed) = match spec.mode {
            SearchMode::Original => {
                let mut tested = 0;
                let mut removed = 0;
                for &u in order {
                    for &v in order {
                        if u == v || !adj.has(u, v) {
                            continue;
                        }
                        let cands = two_step(&adj, u, Some(v), order);
                        if let Some((sepset, entry)) = test_pair(src, level, u, v, cands, spec.trace)? {
                            tested += 1;
                            trace.extend(entry);
                            if let Some(s) = sepset {
                                adj.set(u, v, false);
                                sepsets.insert(u, v, s);
                                removed += 1;
                            }
                        }
                    }
                }
                (tested, removed)
            }
            SearchMode::Stable => {
                let snapshot: Vec<Vec<Vertex>> = {
                    let mut s = vec![Vec::new(); adj.n];
                    for &u in order {
                        s[u] = two_step(&adj, u, None, order);
                    }
                    s
                };
                // Edges as (earlier, later) in the variable order.
                let mut edges = Vec::new();
                for (i, &x) in order.iter().enumerate() {
                    for &y in &order[i + 1..] {
                        if adj.has(x, y) {
                            edges.push((x, y));
                        }
                    }
                }
                let eval = |&(x, y): &(Vertex, Vertex)| -> Result<PairOutcome> {
                    let mut out = PairOutcome { trace: Vec::new(), tested: 0, sepset: None };
                    for (u, v) in [(x, y), (y, x)] {
                        let cands: Vec<Vertex> = snapshot[u].iter().copied().filter(|&w| w != v).collect();
                        if let Some((sepset, entry)) = test_pair(src, level, u, v, cands, spec.trace)? {
                            out.tested += 1;
                            out.trace.extend(entry);
                            if sepset.is_some() {
                                out.sepset = sepset;
                                break;
                            }
                        }
                    }
                    Ok(out)
                };
                let outcomes: Vec<PairOutcome> = if spec.parallel {
                    edges.par_iter().map(eval).collect::<Result<_>>()?
                } else {
                    edges.iter().map(eval).collect::<Result<_>>()?
                };
                let mut tested = 0;
                let mut removed = 0;
                let mut level_trace = Vec::new();
                for (&(x, y), out) in edges.iter().zip(outcomes) {
                    tested += out.tested;
                    level_trace.extend(out.trace);
                    if let Some(s) = out.sepset {
                        adj.set(x, y, false);
                        sepsets.insert(x, y, s);
                        removed += 1;
                    }
                }
                // Report in the same scan order as the original search.
                let rank = rank_of(order, adj.n);
                level_trace.sort_by_key(|e| (rank[e.u], rank[e.v]));
                trace.extend(level_trace);
                (tested, removed)
            }
        };
        levels.push(LevelStats { level, pairs_tested: tested, removed });
        if tested == 0 {
            break;
        }
    }
    Ok(Skeleton {
        graph: adj.to_graph(src.names()),
        sepsets,
        levels,
        trace,
    })
}

/// Position of each vertex in `order`; vertices outside get `usize::MAX`.
pub(crate) fn rank_of(order: &[Vertex], n: usize) -> Vec<usize> {
    let mut rank = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    rank
}
