use super::*;
use crate::graph::{triplex_equivalent, UndirectedGraph, VertexSet};
use crate::synth::{random_amp_cg, GenConfig};

const ABCDE: [&str; 5] = ["a", "b", "c", "d", "e"];

fn names() -> Vec<String> {
    ABCDE.map(String::from).to_vec()
}

fn v(name: &str) -> Vertex {
    ABCDE.iter().position(|n| *n == name).unwrap()
}

fn set(list: &str) -> VertexSet {
    list.chars().map(|c| v(&c.to_string())).collect()
}

/// Sample-version judgements of the order-dependent skeleton example: only
/// these statements hold, each for exactly the listed set.
fn skeleton_example() -> CiSource {
    let holds: Vec<(Vertex, Vertex, VertexSet)> = [("b", "c", "a"), ("a", "e", "d"), ("a", "b", "d"), ("a", "c", "d"), ("b", "d", "e"), ("c", "d", "e")]
        .iter()
        .map(|&(x, y, s)| (v(x).min(v(y)), v(x).max(v(y)), set(s)))
        .collect();
    CiSource::from_fn(names(), move |x, y, s| holds.iter().any(|(a, b, t)| (*a, *b) == (x, y) && t == s))
}

/// The DAG b -> a <- c, b -> d -> e <- c with `c ⊥ d` judged false and
/// `c ⊥ d | {e}` (plus, optionally, `c ⊥ d | {b, e}`) judged true.
fn separator_example(with_be: bool) -> CiSource {
    let dag: ChainGraph = "node a\nnode b\nnode c\nnode d\nnode e\nb -> a\nc -> a\nb -> d\nc -> e\nd -> e"
        .parse()
        .unwrap();
    let truth = CiSource::oracle(dag);
    let (c, d) = (v("c"), v("d"));
    CiSource::from_fn(names(), move |x, y, s| {
        if (x, y) == (c, d) {
            if s.is_empty() {
                return false;
            }
            if *s == set("e") || (with_be && *s == set("be")) {
                return true;
            }
        }
        truth.independent(x, y, s).unwrap()
    })
}

fn undirected(edges: &[(&str, &str)]) -> UndirectedGraph {
    let mut g = UndirectedGraph::new(names());
    for &(a, b) in edges {
        g.add_edge(v(a), v(b));
    }
    g
}

fn removals(skel: &Skeleton, level: usize) -> Vec<(String, String, VertexSet, VertexSet)> {
    skel.trace
        .iter()
        .filter(|e| e.level == level && e.sepset.is_some())
        .map(|e| (ABCDE[e.u].to_string(), ABCDE[e.v].to_string(), e.candidates.clone(), e.sepset.clone().unwrap()))
        .collect()
}

fn row(u: &str, v: &str, cands: &str, s: &str) -> (String, String, VertexSet, VertexSet) {
    (u.to_string(), v.to_string(), set(cands), set(s))
}

const ORDER1: [&str; 5] = ["d", "c", "b", "a", "e"];
const ORDER2: [&str; 5] = ["d", "e", "a", "c", "b"];
const ORDER3: [&str; 5] = ["c", "d", "e", "a", "b"];

fn traced(variant: Variant, order: &[&str]) -> LearnConfig {
    let mut cfg = LearnConfig::new(variant).with_order(order);
    cfg.trace = true;
    cfg
}

#[test]
fn original_skeleton_trace_order1() {
    let skel = skeleton(&skeleton_example(), &traced(Variant::Original, &ORDER1)).unwrap();
    assert_eq!(removals(&skel, 0), vec![]);
    assert_eq!(
        removals(&skel, 1),
        vec![
            row("d", "c", "abe", "e"),
            row("d", "b", "ace", "e"),
            row("c", "b", "ade", "a"),
            row("c", "a", "bde", "d"),
            row("b", "a", "cde", "d"),
            row("a", "e", "d", "d"),
        ]
    );
    assert_eq!(skel.graph, undirected(&[("a", "d"), ("d", "e"), ("e", "b"), ("e", "c")]));
}

#[test]
fn original_skeleton_trace_order2() {
    let skel = skeleton(&skeleton_example(), &traced(Variant::Original, &ORDER2)).unwrap();
    assert_eq!(
        removals(&skel, 1),
        vec![
            row("d", "c", "abe", "e"),
            row("d", "b", "ace", "e"),
            row("e", "a", "bcd", "d"),
            row("a", "c", "bde", "d"),
            row("a", "b", "de", "d"),
        ]
    );
    // b - c survives: its only separator {a} is never a candidate.
    let kept: Vec<(Vertex, Vertex, VertexSet)> = skel
        .trace
        .iter()
        .filter(|e| e.level == 1 && [e.u.min(e.v), e.u.max(e.v)] == [v("b"), v("c")])
        .map(|e| (e.u, e.v, e.candidates.clone()))
        .collect();
    assert_eq!(kept, vec![(v("c"), v("b"), set("de")), (v("b"), v("c"), set("de"))]);
    assert_eq!(skel.graph, undirected(&[("a", "d"), ("d", "e"), ("e", "b"), ("e", "c"), ("b", "c")]));
}

#[test]
fn stable_skeleton_trace() {
    let expected = undirected(&[("a", "d"), ("d", "e"), ("e", "b"), ("e", "c")]);
    let table = vec![
        row("d", "c", "abe", "e"),
        row("d", "b", "ace", "e"),
        row("c", "b", "ade", "a"),
        row("c", "a", "bde", "d"),
        row("b", "a", "cde", "d"),
        row("a", "e", "bcd", "d"),
    ];
    let skel = skeleton(&skeleton_example(), &traced(Variant::Stable, &ORDER1)).unwrap();
    assert_eq!(removals(&skel, 1), table);
    assert_eq!(skel.graph, expected);
    let skel2 = skeleton(&skeleton_example(), &traced(Variant::Stable, &ORDER2)).unwrap();
    assert_eq!(skel2.graph, expected);
    // Same pairs and separators, listed in the other scan order.
    let unordered = |rows: &[(String, String, VertexSet, VertexSet)]| {
        let mut out: Vec<_> = rows
            .iter()
            .map(|r| (r.0.clone().min(r.1.clone()), r.0.clone().max(r.1.clone()), r.3.clone()))
            .collect();
        out.sort();
        out
    };
    let (a, b) = (unordered(&removals(&skel2, 1)), unordered(&table));
    assert_eq!(a, b);
}

#[test]
fn original_learner_depends_on_order() {
    let src = skeleton_example();
    let g1 = learn(&src, &LearnConfig::new(Variant::Original).with_order(&ORDER1)).unwrap();
    let g2 = learn(&src, &LearnConfig::new(Variant::Original).with_order(&ORDER2)).unwrap();
    assert_ne!(g1.graph.skeleton(), g2.graph.skeleton());
    for order in [ORDER1, ORDER2, ORDER3] {
        let s = learn(&src, &LearnConfig::new(Variant::Stable).with_order(&order)).unwrap();
        assert_eq!(s.graph, learn(&src, &LearnConfig::new(Variant::Stable)).unwrap().graph);
    }
}

fn five_node(text: &str) -> ChainGraph {
    format!("node a\nnode b\nnode c\nnode d\nnode e\n{text}").parse().unwrap()
}

#[test]
fn order_dependent_separators_give_five_node() {
    let src = separator_example(false);
    let b = learn(&src, &LearnConfig::new(Variant::Original).with_order(&ORDER1)).unwrap();
    assert_eq!(b.skeleton.sepsets.get(v("c"), v("d")), Some(&set("b")));
    assert_eq!(b.graph, five_node("b -> a\nc -> a\nc -> e\nd -> e\nb -- d"));
    let c = learn(&src, &LearnConfig::new(Variant::Original).with_order(&ORDER3)).unwrap();
    assert_eq!(c.skeleton.sepsets.get(v("c"), v("d")), Some(&set("e")));
    assert_eq!(c.graph, five_node("b -> a\nc -> a\ne -- c\ne -- d\nb -- d"));
}

#[test]
fn conservative_marks_the_triple_ambiguous() {
    let src = separator_example(true);
    for order in [ORDER1, ORDER3] {
        let out = learn(&src, &LearnConfig::new(Variant::StableConservative).with_order(&order)).unwrap();
        let labels = out.labels.unwrap();
        let ced = labels.iter().find(|l| (l.x, l.middle, l.z) == (v("c"), v("e"), v("d"))).unwrap();
        assert_eq!(ced.kind, TripleKind::Ambiguous);
        assert_eq!(labels.iter().filter(|l| l.kind == TripleKind::Ambiguous).count(), 1);
        assert_eq!(out.graph, five_node("b -> a\nc -> a\ne -- c\ne -- d\nb -- d"));
    }
}

#[test]
fn config_validation() {
    let src = skeleton_example();
    for bad in [vec!["a", "b"], vec!["a", "b", "c", "d", "d"], vec!["a", "b", "c", "d", "x"]] {
        let cfg = LearnConfig::new(Variant::Stable).with_order(&bad);
        assert!(matches!(learn(&src, &cfg), Err(Error::Config(_))));
    }
    assert_eq!("stable-conservative".parse::<Variant>().unwrap(), Variant::StableConservative);
    assert!("lcd".parse::<Variant>().is_err());
}

fn random_graphs(p: usize, count: u64) -> impl Iterator<Item = ChainGraph> {
    (0..count).map(move |seed| random_amp_cg(&GenConfig::new(p, 2.0, 1000 + seed)).unwrap())
}

#[test]
fn oracle_runs_recover_the_equivalence_class() {
    for truth in random_graphs(8, 40) {
        let src = CiSource::oracle(truth.clone());
        for variant in Variant::ALL {
            let out = learn(&src, &LearnConfig::new(variant)).unwrap();
            assert_eq!(out.graph.skeleton(), truth.skeleton(), "{variant:?} on\n{truth:?}");
            assert!(triplex_equivalent(&out.graph, &truth).unwrap(), "{variant:?} on\n{truth:?}\ngot\n{:?}", out.graph);
            if let Some(labels) = &out.labels {
                assert!(labels.iter().all(|l| l.kind != TripleKind::Ambiguous));
            }
            assert_eq!(reorient(&out.graph, &out.skeleton.sepsets, out.labels.as_deref()), out.graph);
        }
    }
}

#[test]
fn sepsets_match_removed_edges() {
    for truth in random_graphs(7, 10) {
        let src = CiSource::oracle(truth.clone());
        let skel = skeleton(&src, &LearnConfig::new(Variant::Original)).unwrap();
        for x in 0..7 {
            for y in x + 1..7 {
                assert_ne!(skel.graph.has_edge(x, y), skel.sepsets.contains(x, y));
            }
        }
    }
}

#[test]
fn parallel_stable_matches_sequential() {
    for truth in random_graphs(9, 5) {
        let src = CiSource::oracle(truth.clone());
        let mut cfg = LearnConfig::new(Variant::Stable);
        cfg.trace = true;
        let seq = skeleton(&src, &cfg).unwrap();
        let count = src.query_count();
        let par_src = CiSource::oracle(truth);
        cfg.parallel = true;
        let par = skeleton(&par_src, &cfg).unwrap();
        assert_eq!(seq.graph, par.graph);
        assert_eq!(seq.sepsets, par.sepsets);
        assert_eq!(seq.trace, par.trace);
        assert_eq!(par_src.query_count(), count);
    }
}

#[test]
fn warm_cache_needs_no_new_queries() {
    let truth = random_amp_cg(&GenConfig::new(8, 2.0, 5)).unwrap();
    let src = CiSource::oracle(truth);
    let cfg = LearnConfig::new(Variant::StableConservative);
    let first = learn(&src, &cfg).unwrap();
    let count = src.query_count();
    let second = learn(&src, &cfg).unwrap();
    assert_eq!(src.query_count(), count);
    assert_eq!(first.graph, second.graph);
}

#[test]
fn level_cap_limits_conditioning_sets() {
    let truth = random_amp_cg(&GenConfig::new(8, 3.0, 9)).unwrap();
    let src = CiSource::oracle(truth);
    let mut cfg = LearnConfig::new(Variant::Stable);
    cfg.max_sepset_size = Some(1);
    let skel = skeleton(&src, &cfg).unwrap();
    assert!(skel.levels.len() <= 2);
    assert!(skel.sepsets.iter().all(|(_, s)| s.len() <= 1));
}
