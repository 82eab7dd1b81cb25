use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{reaches, separated};
use crate::error::{Error, Result};
use crate::graph::{set_to_mask, ChainGraph, Vertex, VertexSet};

/// Outcome of a restricted separator search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Restricted {
    Separator(VertexSet),
    NotSeparable,
}

/// Vertices of `targets` reachable from `start` by BFS that stops at target
/// vertices.
fn mark_reachable(adj: &[Vec<Vertex>], start: &VertexSet, targets: &[bool]) -> VertexSet {
    let mut seen = vec![false; adj.len()];
    let mut marked = VertexSet::new();
    let mut queue: VecDeque<Vertex> = start.iter().copied().collect();
    for &s in start {
        seen[s] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if targets[w] {
                marked.insert(w);
            } else {
                queue.push_back(w);
            }
        }
    }
    marked
}

/// Two-pass BFS shrink: keeps the vertices of the separator `seed` that are
/// reachable from `u` and then from `v` without crossing other seed vertices.
pub(crate) fn shrink(adj: &[Vec<Vertex>], u: &VertexSet, v: &VertexSet, seed: &VertexSet) -> VertexSet {
    let n = adj.len();
    let first = mark_reachable(adj, u, &set_to_mask(seed, n));
    mark_reachable(adj, v, &set_to_mask(&first, n))
}

fn check_pair(g: &ChainGraph, u: Vertex, v: Vertex) -> Result<()> {
    for w in [u, v] {
        if w >= g.n() {
            return Err(Error::UnknownVertex(format!("#{w}")));
        }
    }
    if u == v {
        return Err(Error::InvalidQuery("u and v must differ".into()));
    }
    if g.adjacent(u, v) {
        return Err(Error::Adjacent(g.name(u).into(), g.name(v).into()));
    }
    Ok(())
}

fn check_set(g: &ChainGraph, u: Vertex, v: Vertex, s: &VertexSet) -> Result<()> {
    if let Some(&w) = s.iter().find(|&&w| w >= g.n()) {
        return Err(Error::UnknownVertex(format!("#{w}")));
    }
    if s.contains(&u) || s.contains(&v) {
        return Err(Error::InvalidQuery("the set must not contain u or v".into()));
    }
    Ok(())
}

/// The augmented view `K_D` for an ancestral set `D`: directed edges into `D`
/// and undirected edges inside `Co(D)`. For `Z ⊆ D \ (X ∪ Y)` with
/// `An(X ∪ Y ∪ Z) ⊆ D`, separation of `X` and `Y` by `Z` in `K_D` implies
/// p-separation, and `K_{An(X ∪ Y ∪ Z)}` is exactly `(G[X ∪ Y ∪ Z])^a`.
fn k_view(g: &ChainGraph, d: &[bool]) -> Vec<Vec<Vertex>> {
    g.augmented_view(d, &g.coherent_mask(d))
}

/// Ancestral sets `An(X ∪ Y ∪ T)` for `T ⊆ ant(X ∪ Y)`, visited lazily:
/// `An(X ∪ Y)` first, then `ant(X ∪ Y)`, then the rest breadth-first by
/// single-vertex extensions. Stops early when `visit` returns `Some`.
///
/// The number of such sets can grow exponentially with the size of the
/// anterior set.
fn ancestral_sets<T>(
    g: &ChainGraph,
    xy: &VertexSet,
    ant: &[bool],
    mut visit: impl FnMut(&[bool]) -> Option<T>,
) -> Option<T> {
    let n = g.n();
    let start = g.ancestral_mask(xy);
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    seen.insert(start.clone());
    if let Some(t) = visit(&start) {
        return Some(t);
    }
    if seen.insert(ant.to_vec()) {
        if let Some(t) = visit(ant) {
            return Some(t);
        }
    }
    let mut queue = VecDeque::from([start]);
    while let Some(d) = queue.pop_front() {
        for w in (0..n).filter(|&w| ant[w] && !d[w]) {
            let mut next = d.clone();
            for (m, &a) in next.iter_mut().zip(&g.ancestral_mask(&[w].into())) {
                *m |= a;
            }
            if seen.insert(next.clone()) {
                if let Some(t) = visit(&next) {
                    return Some(t);
                }
                queue.push_back(next);
            }
        }
    }
    None
}

/// Shrinks a separator until it is minimal in its own augmented view and no
/// single vertex can be dropped.
fn refine(g: &ChainGraph, x: &VertexSet, y: &VertexSet, mut z: VertexSet) -> VertexSet {
    loop {
        let all: VertexSet = x.iter().chain(y).chain(&z).copied().collect();
        let k = k_view(g, &g.ancestral_mask(&all));
        let shrunk = shrink(&k, x, y, &z);
        if shrunk != z {
            z = shrunk;
            continue;
        }
        let droppable = z.iter().copied().find(|&w| {
            let mut smaller = z.clone();
            smaller.remove(&w);
            separated(g, x, y, &smaller)
        });
        match droppable {
            Some(w) => {
                z.remove(&w);
            }
            None => return z,
        }
    }
}

/// Some subset of `allowed` that separates `X` from `Y`, or `None` if no
/// subset does. `allowed` must lie inside `ant(X ∪ Y) \ (X ∪ Y)`.
fn separating_subset(
    g: &ChainGraph,
    x: &VertexSet,
    y: &VertexSet,
    allowed: &VertexSet,
    ant: &[bool],
) -> Option<VertexSet> {
    if separated(g, x, y, allowed) {
        return Some(allowed.clone());
    }
    let xy: VertexSet = x.union(y).copied().collect();
    ancestral_sets(g, &xy, ant, |d| {
        let z: VertexSet = allowed.iter().copied().filter(|&w| d[w]).collect();
        let k = k_view(g, d);
        (!reaches(&k, x, y, &set_to_mask(&z, g.n()))).then_some(z)
    })
}

fn is_minimal(g: &ChainGraph, x: &VertexSet, y: &VertexSet, z: &VertexSet) -> bool {
    let xy: VertexSet = x.union(y).copied().collect();
    let ant = g.anterior_mask(&xy);
    if z.iter().any(|&w| !ant[w]) {
        return false;
    }
    z.iter().all(|w| {
        let mut smaller = z.clone();
        smaller.remove(w);
        !separated(g, x, y, &smaller)
    })
}

fn check_sets(g: &ChainGraph, x: &VertexSet, y: &VertexSet) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidQuery("X and Y must be non-empty".into()));
    }
    if let Some(&w) = x.iter().chain(y).find(|&&w| w >= g.n()) {
        return Err(Error::UnknownVertex(format!("#{w}")));
    }
    if let Some(&w) = x.intersection(y).next() {
        return Err(Error::InvalidQuery(format!("`{}` is in both X and Y", g.name(w))));
    }
    for &a in x {
        for &b in y {
            if g.adjacent(a, b) {
                return Err(Error::Adjacent(g.name(a).into(), g.name(b).into()));
            }
        }
    }
    Ok(())
}

/// True iff the separator `z` of `u` and `v` is minimal: it lies in
/// `ant({u, v})` and no vertex can be removed without losing separation.
/// Errors if `z` does not separate `u` from `v`.
pub fn is_minimal_separator(g: &ChainGraph, u: Vertex, v: Vertex, z: &VertexSet) -> Result<bool> {
    check_pair(g, u, v)?;
    check_set(g, u, v, z)?;
    let (x, y) = (VertexSet::from([u]), VertexSet::from([v]));
    if !separated(g, &x, &y, z) {
        return Err(Error::NotASeparator(g.name(u).into(), g.name(v).into()));
    }
    Ok(is_minimal(g, &x, &y, z))
}

/// A minimal separator of the non-adjacent vertices `u` and `v`.
pub fn find_minimal_separator(g: &ChainGraph, u: Vertex, v: Vertex) -> Result<VertexSet> {
    check_pair(g, u, v)?;
    minimal_separator_sets(g, &[u].into(), &[v].into())
}

/// A subset of `s` separating `u` from `v`, if one exists. Tries
/// `S ∩ ant({u, v})` first.
pub fn restricted_separator(g: &ChainGraph, u: Vertex, v: Vertex, s: &VertexSet) -> Result<Restricted> {
    check_pair(g, u, v)?;
    check_set(g, u, v, s)?;
    let (x, y) = (VertexSet::from([u]), VertexSet::from([v]));
    let ant = g.anterior_mask(&[u, v].into());
    let allowed: VertexSet = s.iter().copied().filter(|&w| ant[w]).collect();
    Ok(match separating_subset(g, &x, &y, &allowed, &ant) {
        Some(z) => Restricted::Separator(z),
        None => Restricted::NotSeparable,
    })
}

/// A minimal separator of `u` and `v` contained in `s`, if one exists.
pub fn restricted_minimal_separator(
    g: &ChainGraph,
    u: Vertex,
    v: Vertex,
    s: &VertexSet,
) -> Result<Restricted> {
    check_pair(g, u, v)?;
    check_set(g, u, v, s)?;
    let (x, y) = (VertexSet::from([u]), VertexSet::from([v]));
    let ant = g.anterior_mask(&[u, v].into());
    let allowed: VertexSet = s.iter().copied().filter(|&w| ant[w]).collect();
    Ok(match separating_subset(g, &x, &y, &allowed, &ant) {
        Some(z) => Restricted::Separator(refine(g, &x, &y, z)),
        None => Restricted::NotSeparable,
    })
}

/// A minimal separator of the disjoint, mutually non-adjacent sets `X` and
/// `Y`. The result excludes `X ∪ Y`.
pub fn minimal_separator_sets(g: &ChainGraph, x: &VertexSet, y: &VertexSet) -> Result<VertexSet> {
    check_sets(g, x, y)?;
    let xy: VertexSet = x.union(y).copied().collect();
    let ant = g.anterior_mask(&xy);
    let allowed: VertexSet = (0..g.n()).filter(|&w| ant[w] && !xy.contains(&w)).collect();
    // Separation of An(X ∪ Y) \ (X ∪ Y) within its own view always exists
    // for non-adjacent sets, but search all views in case it does not.
    let z = ancestral_sets(g, &xy, &ant, |d| {
        let z: VertexSet = allowed.iter().copied().filter(|&w| d[w]).collect();
        (!reaches(&k_view(g, d), x, y, &set_to_mask(&z, g.n()))).then_some(z)
    })
    .ok_or_else(|| {
        Error::InvalidQuery("no separator exists for the given sets".into())
    })?;
    Ok(refine(g, x, y, z))
}

/// Every minimal separator of the non-adjacent vertices `u` and `v`, sorted.
pub fn enumerate_minimal_separators(g: &ChainGraph, u: Vertex, v: Vertex) -> Result<Vec<VertexSet>> {
    check_pair(g, u, v)?;
    let (x, y) = (VertexSet::from([u]), VertexSet::from([v]));
    let uv: VertexSet = [u, v].into();
    let ant = g.anterior_mask(&uv);
    let mut candidates: BTreeSet<VertexSet> = BTreeSet::new();
    ancestral_sets(g, &uv, &ant, |d| {
        let k = k_view(g, d);
        for sep in ug_minimal_separators(&k, &x, &y) {
            if sep.iter().all(|&w| d[w]) {
                candidates.insert(sep);
            }
        }
        None::<()>
    });
    // Every candidate separates; the minimal ones have no candidate below them.
    let minimal = candidates
        .iter()
        .filter(|z| !candidates.iter().any(|c| c.len() < z.len() && c.is_subset(z)))
        .cloned()
        .collect();
    Ok(minimal)
}

/// Vertices reachable from `start` avoiding `removed`, with their neighbourhood.
fn component(adj: &[Vec<Vertex>], start: &VertexSet, removed: &[bool]) -> (Vec<bool>, VertexSet) {
    let mut inside = vec![false; adj.len()];
    let mut queue: VecDeque<Vertex> = VecDeque::new();
    for &s in start {
        if !removed[s] {
            inside[s] = true;
            queue.push_back(s);
        }
    }
    let mut border = VertexSet::new();
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if removed[w] {
                border.insert(w);
            } else if !inside[w] {
                inside[w] = true;
                queue.push_back(w);
            }
        }
    }
    (inside, border)
}

/// All minimal `(X, Y)`-separators of an undirected graph given as adjacency
/// lists, with `X` and `Y` non-adjacent. Starts from the separator closest to
/// `X` and moves one separator vertex at a time to the `X` side.
pub(crate) fn ug_minimal_separators(adj: &[Vec<Vertex>], x: &VertexSet, y: &VertexSet) -> Vec<VertexSet> {
    let n = adj.len();
    let neighbourhood = |set: &VertexSet| -> VertexSet {
        set.iter()
            .flat_map(|&v| adj[v].iter().copied())
            .filter(|w| !set.contains(w))
            .collect()
    };
    let y_side = |removed: &VertexSet| -> Option<VertexSet> {
        let (inside, border) = component(adj, y, &set_to_mask(removed, n));
        if x.iter().any(|&a| inside[a]) {
            return None;
        }
        Some(border)
    };
    let near_y = neighbourhood(y);
    if x.iter().any(|a| near_y.contains(a)) {
        return Vec::new();
    }
    let Some(first) = y_side(&neighbourhood(x)) else {
        return Vec::new();
    };
    let mut found: BTreeSet<VertexSet> = BTreeSet::from([first.clone()]);
    let mut queue = VecDeque::from([first]);
    while let Some(sep) = queue.pop_front() {
        for &w in &sep {
            if near_y.contains(&w) {
                continue;
            }
            let mut removed = sep.clone();
            removed.extend(adj[w].iter().copied().filter(|c| !x.contains(c)));
            if let Some(next) = y_side(&removed) {
                if found.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    found.into_iter().collect()
}
