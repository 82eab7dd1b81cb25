use crate::citest::CiSource;
use crate::error::Result;
use crate::graph::{UndirectedGraph, Vertex, VertexSet};

use super::orient::{unshielded_triples, TripleKind, TripleLabel};
use super::skeleton::{next_combination, two_step, Adjacency};

/// Visits every subset of `items` with at most `max` elements, smallest
/// first, until `visit` returns false.
fn for_subsets<F>(items: &[Vertex], max: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&VertexSet) -> Result<bool>,
{
    for k in 0..=max.min(items.len()) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let s: VertexSet = idx.iter().map(|&i| items[i]).collect();
            if !visit(&s)? {
                return Ok(());
            }
            if !next_combination(&mut idx, items.len()) {
                break;
            }
        }
    }
    Ok(())
}

/// Labels every unshielded triple `(x, m, z)` of `skeleton` by searching the
/// subsets of `ad(x) ∪ ad(ad(x))` and of `ad(z) ∪ ad(ad(z))`, up to
/// `max_size` elements, for sets separating `x` and `z`. The triple is
/// unambiguous when some set is found and `m` lies in all or none of them.
///
/// The search stops early once `m` has been seen both inside and outside a
/// separating set, since the label is then settled.
pub fn label_triples(src: &CiSource, skeleton: &UndirectedGraph, max_size: usize) -> Result<Vec<TripleLabel>> {
    let adj = Adjacency::from_graph(skeleton);
    let all: Vec<Vertex> = (0..skeleton.n()).collect();
    let mut labels = Vec::new();
    for (x, m, z) in unshielded_triples(skeleton) {
        let (mut with, mut without) = (false, false);
        for (a, b) in [(x, z), (z, x)] {
            let cands: Vec<Vertex> = two_step(&adj, a, None, &all).into_iter().filter(|&w| w != b).collect();
            for_subsets(&cands, max_size, |s| {
                if src.independent(x, z, s)? {
                    if s.contains(&m) {
                        with = true;
                    } else {
                        without = true;
                    }
                }
                Ok(!(with && without))
            })?;
            if with && without {
                break;
            }
        }
        let kind = match (with, without) {
            (true, false) => TripleKind::NonTriplex,
            (false, true) => TripleKind::Triplex,
            _ => TripleKind::Ambiguous,
        };
        labels.push(TripleLabel { x, middle: m, z, kind });
    }
    Ok(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ChainGraph;

    #[test]
    fn subsets_by_size() {
        let mut seen = Vec::new();
        for_subsets(&[1, 2, 3], 2, |s| {
            seen.push(s.iter().copied().collect::<Vec<_>>());
            Ok(true)
        })
        .unwrap();
        assert_eq!(seen, vec![vec![], vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut count = 0;
        for_subsets(&[1, 2, 3], 3, |_| {
            count += 1;
            Ok(count < 4)
        })
        .unwrap();
        assert_eq!(count, 4);
    }

    fn label_of(g: &ChainGraph) -> Vec<TripleKind> {
        let src = CiSource::oracle(g.clone());
        label_triples(&src, &g.skeleton(), g.n()).unwrap().into_iter().map(|l| l.kind).collect()
    }

    #[test]
    fn oracle_labels() {
        assert_eq!(label_of(&"x -> y\nz -> y".parse().unwrap()), [TripleKind::Triplex]);
        assert_eq!(label_of(&"x -> y\ny -> z".parse().unwrap()), [TripleKind::NonTriplex]);
        assert_eq!(label_of(&"x -> y\ny -- z".parse().unwrap()), [TripleKind::Triplex]);
        assert_eq!(label_of(&"x -- y\ny -- z".parse().unwrap()), [TripleKind::NonTriplex]);
    }

    #[test]
    fn never_separated_is_ambiguous() {
        let g = UndirectedGraph::from_lists(
            ["x", "y", "z"].map(String::from).to_vec(),
            vec![vec![1], vec![0, 2], vec![1]],
        );
        let src = CiSource::from_fn(g.names().to_vec(), |_, _, _| false);
        let labels = label_triples(&src, &g, 3).unwrap();
        assert_eq!(labels[0].kind, TripleKind::Ambiguous);
    }
}
