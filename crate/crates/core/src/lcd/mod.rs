//! Decomposition-based learning: an undirected independence graph is
//! triangulated into a junction tree, skeletons are recovered locally inside
//! its nodes, merged, pruned globally and oriented.

mod chordal;
mod uig;

pub use chordal::{is_chordal, junction_tree, triangulate, SeparationTree, TreeEdge};
pub use uig::{build_uig, UigMethod, DISCRETE_FULL_CONDITIONAL_MAX};

use rayon::prelude::*;

use crate::citest::{CiSource, SepSetMap};
use crate::error::Result;
use crate::graph::{UndirectedGraph, Vertex};
use crate::learn::{finish, search, unshielded_triples, Adjacency, LearnConfig, Learned, SearchSpec, Skeleton};

/// Output of [`lcd_amp`] with its intermediate structures.
#[derive(Debug, Clone)]
pub struct LcdLearned {
    /// The oriented graph; its skeleton is the pruned global one, carrying
    /// the separating sets from every phase.
    pub learned: Learned,
    pub uig: UndirectedGraph,
    pub tree: SeparationTree,
    /// One skeleton per tree node, over that node's vertices.
    pub local: Vec<Skeleton>,
    /// Global skeleton before the prune.
    pub merged: UndirectedGraph,
}

/// Learns a chain graph by local skeleton recovery in the nodes of a
/// junction tree of the UIG produced by `uig`.
///
/// `cfg.variant` picks the search mode of the local and global phases and
/// whether triples are labelled conservatively.
pub fn lcd_amp(src: &CiSource, cfg: &LearnConfig, uig: &UigMethod) -> Result<LcdLearned> {
    let order = cfg.resolve_order(src.names())?;
    let n = src.n_vars();
    let uig = build_uig(src, uig)?;
    let tree = junction_tree(&triangulate(&uig))?;

    let local_search = |node: &crate::graph::VertexSet| -> Result<Skeleton> {
        let sub: Vec<Vertex> = order.iter().copied().filter(|v| node.contains(v)).collect();
        let spec = SearchSpec {
            order: &sub,
            mode: cfg.variant.mode(),
            max_level: cfg.max_sepset_size,
            parallel: false,
            trace: cfg.trace,
        };
        search(src, Adjacency::complete(n, &sub), &spec)
    };
    let local: Vec<Skeleton> = if cfg.parallel {
        tree.nodes.par_iter().map(local_search).collect::<Result<_>>()?
    } else {
        tree.nodes.iter().map(local_search).collect::<Result<_>>()?
    };

    // An edge survives iff its endpoints share a node and no local search
    // removed it; the first removing node supplies the separating set.
    let mut merged = Adjacency::empty(n);
    for node in &tree.nodes {
        let members: Vec<Vertex> = node.iter().copied().collect();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                merged.set(x, y, true);
            }
        }
    }
    let mut sepsets = SepSetMap::new();
    for skel in &local {
        for (&(x, y), s) in skel.sepsets.iter() {
            merged.set(x, y, false);
            if !sepsets.contains(x, y) {
                sepsets.insert(x, y, s.clone());
            }
        }
    }
    let merged_graph = merged.to_graph(src.names());

    let spec = SearchSpec {
        order: &order,
        mode: cfg.variant.mode(),
        max_level: cfg.max_sepset_size,
        parallel: cfg.parallel,
        trace: cfg.trace,
    };
    let mut skel = search(src, merged, &spec)?;
    for (&(x, y), s) in skel.sepsets.iter() {
        sepsets.insert(x, y, s.clone());
    }

    // Endpoints of unshielded triples that never met in a node get the first
    // tree separator on the path between them that the source accepts.
    for (x, _, z) in unshielded_triples(&skel.graph) {
        if sepsets.contains(x, z) {
            continue;
        }
        for s in tree.path_separators(x, z) {
            if src.independent(x, z, &s)? {
                sepsets.insert(x, z, s);
                break;
            }
        }
    }
    skel.sepsets = sepsets;

    let learned = finish(src, skel, cfg)?;
    Ok(LcdLearned { learned, uig, tree, local, merged: merged_graph })
}
