use super::SeparationQuery;
use crate::error::Result;
use crate::graph::{set_to_mask, ChainGraph, Link, Vertex};

/// How a chain meets a vertex `b` along one of its edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    /// Arrowhead at `b`.
    Head,
    /// Tail at `b`.
    Tail,
    Undirected,
}

impl End {
    fn index(self) -> usize {
        self as usize
    }
}

/// End type at `b` of the edge joining `b` and `other`.
fn end_at(g: &ChainGraph, b: Vertex, other: Vertex) -> End {
    match g.link(b, other) {
        Link::In => End::Head,
        Link::Out => End::Tail,
        Link::Undirected => End::Undirected,
        Link::Absent => unreachable!("vertices are not adjacent"),
    }
}

struct Rules<'a> {
    #[cfg_attr(not(test), allow(dead_code))]
    g: &'a ChainGraph,
    in_z: Vec<bool>,
    in_an_z: Vec<bool>,
    /// `pa(b) \ Z` is non-empty.
    free_parent: Vec<bool>,
}

impl<'a> Rules<'a> {
    fn new(g: &'a ChainGraph, q: &SeparationQuery) -> Self {
        let in_z = set_to_mask(&q.z, g.n());
        let in_an_z = g.ancestral_mask(&q.z);
        let free_parent = (0..g.n())
            .map(|b| g.parents(b).iter().any(|&p| !in_z[p]))
            .collect();
        Rules {
            g,
            in_z,
            in_an_z,
            free_parent,
        }
    }

    /// Whether a chain entering `b` with end `entry` may continue with end
    /// `exit` at `b`.
    fn open(&self, b: Vertex, entry: End, exit: End) -> bool {
        let triplex = matches!(
            (entry, exit),
            (End::Head, End::Head)
                | (End::Head, End::Undirected)
                | (End::Undirected, End::Head)
        );
        if triplex {
            self.in_an_z[b]
        } else {
            !self.in_z[b]
                || (entry == End::Undirected && exit == End::Undirected && self.free_parent[b])
        }
    }
}

/// True iff no chain between `X` and `Y` is open given `Z`.
///
/// A triplex node (`→B←`, `→B−`, `−B←`) is open iff it lies in `An(Z)`. Any
/// other node is open iff it is outside `Z`, or the chain passes `A−B−C` and
/// `B` has a parent outside `Z`. The search runs over (vertex, entry end)
/// states, so it is linear in the number of edges.
pub fn p_separated_pathwise(g: &ChainGraph, q: &SeparationQuery) -> Result<bool> {
    q.validate(g)?;
    let rules = Rules::new(g, q);
    let n = g.n();
    let in_y = set_to_mask(&q.y, n);
    let mut seen = vec![[false; 3]; n];
    let mut stack: Vec<(Vertex, End)> = Vec::new();
    for &x in &q.x {
        for c in g.adjacencies(x) {
            if in_y[c] {
                return Ok(false);
            }
            let entry = end_at(g, c, x);
            if !seen[c][entry.index()] {
                seen[c][entry.index()] = true;
                stack.push((c, entry));
            }
        }
    }
    while let Some((b, entry)) = stack.pop() {
        for c in g.adjacencies(b) {
            if !rules.open(b, entry, end_at(g, b, c)) {
                continue;
            }
            if in_y[c] {
                return Ok(false);
            }
            let next = end_at(g, c, b);
            if !seen[c][next.index()] {
                seen[c][next.index()] = true;
                stack.push((c, next));
            }
        }
    }
    Ok(true)
}

/// Exhaustive search over simple chains. Exponential; for cross-checking the
/// state search on small graphs.
#[cfg(test)]
pub(crate) fn p_separated_by_chains(g: &ChainGraph, q: &SeparationQuery) -> bool {
    fn extend(
        rules: &Rules,
        q: &SeparationQuery,
        path: &mut Vec<Vertex>,
        on_path: &mut [bool],
    ) -> bool {
        let b = *path.last().unwrap();
        if path.len() > 1 && q.y.contains(&b) {
            return true;
        }
        for c in rules.g.adjacencies(b) {
            if on_path[c] || q.x.contains(&c) {
                continue;
            }
            if path.len() > 1 {
                let a = path[path.len() - 2];
                if !rules.open(b, end_at(rules.g, b, a), end_at(rules.g, b, c)) {
                    continue;
                }
            }
            path.push(c);
            on_path[c] = true;
            let found = extend(rules, q, path, on_path);
            on_path[c] = false;
            path.pop();
            if found {
                return true;
            }
        }
        false
    }
    let rules = Rules::new(g, q);
    let mut on_path = vec![false; g.n()];
    for &x in &q.x {
        on_path[x] = true;
        let mut path = vec![x];
        let open = extend(&rules, q, &mut path, &mut on_path);
        on_path[x] = false;
        if open {
            return false;
        }
    }
    true
}
