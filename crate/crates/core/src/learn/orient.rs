use std::collections::VecDeque;

use serde::Serialize;

use crate::citest::SepSetMap;
use crate::graph::{ChainGraph, UndirectedGraph, Vertex};

/// Classification of an unshielded triple `x - middle - z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TripleKind {
    Triplex,
    NonTriplex,
    Ambiguous,
}

/// Label of an unshielded triple; `x < z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TripleLabel {
    pub x: Vertex,
    pub middle: Vertex,
    pub z: Vertex,
    pub kind: TripleKind,
}

/// Unshielded triples `(x, m, z)` with `x < z`, sorted.
pub fn unshielded_triples(g: &UndirectedGraph) -> Vec<(Vertex, Vertex, Vertex)> {
    let mut out = Vec::new();
    for m in 0..g.n() {
        let nb = g.neighbors(m);
        for (i, &x) in nb.iter().enumerate() {
            for &z in &nb[i + 1..] {
                if !g.has_edge(x, z) {
                    out.push((x, m, z));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// End marks during orientation. `block[x][y]` is a block at the `x` end of
/// the edge `x - y`: the edge may not end up as `y -> x`. Marks are only ever
/// added and every rule premise is monotone in them, so the closure does not
/// depend on the order in which rules fire.
struct Marks<'a> {
    g: &'a UndirectedGraph,
    block: Vec<Vec<bool>>,
}

impl Marks<'_> {
    fn add(&mut self, x: Vertex, y: Vertex) -> bool {
        let fresh = !self.block[x][y];
        self.block[x][y] = true;
        fresh
    }

    /// True iff `to` is reachable from `from` along edges `a - b` carrying a
    /// block at `a`, without using the edge `from - to` itself.
    fn blocked_path(&self, from: Vertex, to: Vertex) -> bool {
        let mut seen = vec![false; self.g.n()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(a) = queue.pop_front() {
            for &b in self.g.neighbors(a) {
                if (a == from && b == to) || !self.block[a][b] {
                    continue;
                }
                if b == to {
                    return true;
                }
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        false
    }
}

/// Orientation rules, each written with `A`, `B`, `C`, `D` as in the
/// orientation-rules figure. "`X |- Y`" is a block at the `X` end; a block
/// at one end only becomes `X -> Y` in the output.
///
/// | rule | premise                                                        | adds     |
/// |------|----------------------------------------------------------------|----------|
/// | R1   | `A - B - C` unshielded, decided triplex                         | `A |- B`, `C |- B` |
/// | R2   | `A |- B - C` unshielded, decided non-triplex                    | `B |- C` |
/// | R3   | `A - B` and a path `A |- .. |- B` of length at least two       | `A |- B` |
/// | R4   | `A - B`; `C |- B`, `D |- B`, `A - C`, `A - D`; `C - A - D` unshielded and decided non-triplex | `A |- B` |
///
/// R2 leaves the circle end at `A` unconstrained. R4 is the block analogue
/// of the third Meek rule; its premise does not look at marks on `A - C` or
/// `A - D`.
fn close(marks: &mut Marks, decide: &dyn Fn(Vertex, Vertex, Vertex) -> Option<bool>) {
    let g = marks.g;
    let triples = unshielded_triples(g);
    for &(x, m, z) in &triples {
        if decide(x, m, z) == Some(true) {
            marks.add(x, m);
            marks.add(z, m);
        }
    }
    let nontriplex: Vec<(Vertex, Vertex, Vertex)> =
        triples.iter().copied().filter(|&(x, m, z)| decide(x, m, z) == Some(false)).collect();
    let edges = g.edges();
    loop {
        let mut changed = false;
        for &(x, m, z) in &nontriplex {
            for (a, c) in [(x, z), (z, x)] {
                if marks.block[a][m] && !marks.block[m][c] {
                    changed |= marks.add(m, c);
                }
            }
        }
        for &(p, q) in &edges {
            for (a, b) in [(p, q), (q, p)] {
                if !marks.block[a][b] && marks.blocked_path(a, b) {
                    changed |= marks.add(a, b);
                }
            }
        }
        for &(x, m, z) in &nontriplex {
            // C = x, A = m, D = z; look for B adjacent to all three.
            for &b in g.neighbors(m) {
                if b != x && b != z && g.has_edge(x, b) && g.has_edge(z, b) && marks.block[x][b] && marks.block[z][b]
                    && !marks.block[m][b]
                {
                    changed |= marks.add(m, b);
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Closes the marks, then reads each edge still without marks as blocked at
/// both ends, as the output will, and closes again. The second pass only
/// matters for unfaithful decisions; it makes the result a fixpoint of
/// [`reorient`].
fn settle(marks: &mut Marks, decide: &dyn Fn(Vertex, Vertex, Vertex) -> Option<bool>) {
    close(marks, decide);
    let mut open = false;
    for (x, y) in marks.g.edges() {
        if !marks.block[x][y] && !marks.block[y][x] {
            marks.add(x, y);
            marks.add(y, x);
            open = true;
        }
    }
    if open {
        close(marks, decide);
    }
}

fn export(marks: &Marks) -> ChainGraph {
    let g = marks.g;
    let mut out = ChainGraph::new(g.names().to_vec()).expect("names are distinct");
    for (x, y) in g.edges() {
        let added = match (marks.block[x][y], marks.block[y][x]) {
            (true, false) => out.add_directed(x, y),
            (false, true) => out.add_directed(y, x),
            _ => out.add_undirected(x, y),
        };
        added.expect("each pair is added once");
    }
    out
}

fn decider<'a>(
    sepsets: &'a SepSetMap,
    labels: Option<&'a [TripleLabel]>,
) -> impl Fn(Vertex, Vertex, Vertex) -> Option<bool> + 'a {
    move |x, m, z| match labels {
        Some(labels) => labels
            .iter()
            .find(|l| (l.x, l.middle, l.z) == (x.min(z), m, x.max(z)))
            .and_then(|l| match l.kind {
                TripleKind::Triplex => Some(true),
                TripleKind::NonTriplex => Some(false),
                TripleKind::Ambiguous => None,
            }),
        None => sepsets.get(x, z).map(|s| !s.contains(&m)),
    }
}

/// Orients a skeleton with rules R1-R4. Triplex decisions come from
/// `labels` when given, where ambiguous triples are left alone, and from the
/// recorded separating sets otherwise.
pub fn orient(skeleton: &UndirectedGraph, sepsets: &SepSetMap, labels: Option<&[TripleLabel]>) -> ChainGraph {
    let n = skeleton.n();
    let mut marks = Marks { g: skeleton, block: vec![vec![false; n]; n] };
    settle(&mut marks, &decider(sepsets, labels));
    export(&marks)
}

/// Re-runs the rules on an already oriented graph, reading `a -> b` as a
/// block at `a` and `a - b` as blocks at both ends.
pub fn reorient(g: &ChainGraph, sepsets: &SepSetMap, labels: Option<&[TripleLabel]>) -> ChainGraph {
    let skeleton = g.skeleton();
    let n = g.n();
    let mut block = vec![vec![false; n]; n];
    for (a, b) in g.directed_edges() {
        block[a][b] = true;
    }
    for (a, b) in g.undirected_edges() {
        block[a][b] = true;
        block[b][a] = true;
    }
    let mut marks = Marks { g: &skeleton, block };
    settle(&mut marks, &decider(sepsets, labels));
    export(&marks)
}
