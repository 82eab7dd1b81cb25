use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use nalgebra::DMatrix;

use super::stats::{fisher_z_p_value, gsquare, partial_correlation};
use super::{DataKind, Dataset};
use crate::error::{Error, Result};
use crate::graph::{ChainGraph, Vertex, VertexSet};
use crate::separation::separated;

type Decide = dyn Fn(Vertex, Vertex, &VertexSet) -> bool + Send + Sync;

/// Where independence decisions come from.
pub enum Backend {
    /// p-separation in a known graph.
    Oracle(ChainGraph),
    /// Fisher's z-test on partial correlations.
    Gaussian { corr: DMatrix<f64>, n: usize, alpha: f64 },
    /// G² test on discrete data.
    Discrete { data: Dataset, alpha: f64 },
    /// Arbitrary decision function, called with `u < v`.
    Custom(Box<Decide>),
}

impl fmt::Debug for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Oracle(g) => f.debug_tuple("Oracle").field(g).finish(),
            Backend::Gaussian { n, alpha, .. } => {
                f.debug_struct("Gaussian").field("n", n).field("alpha", alpha).finish()
            }
            Backend::Discrete { data, alpha } => f
                .debug_struct("Discrete")
                .field("n", &data.n_rows())
                .field("alpha", alpha)
                .finish(),
            Backend::Custom(_) => f.write_str("Custom"),
        }
    }
}

type Key = (Vertex, Vertex, Vec<Vertex>);

/// A conditional-independence oracle or test with a decision cache.
///
/// Queries are symmetric in `u` and `v`. Safe to share between threads;
/// [`CiSource::query_count`] counts distinct evaluated queries exactly.
#[derive(Debug)]
pub struct CiSource {
    names: Vec<String>,
    backend: Backend,
    cache: Mutex<HashMap<Key, bool>>,
    evaluations: AtomicUsize,
}

impl CiSource {
    fn with_backend(names: Vec<String>, backend: Backend) -> Self {
        CiSource {
            names,
            backend,
            cache: Mutex::new(HashMap::new()),
            evaluations: AtomicUsize::new(0),
        }
    }

    /// Perfect oracle answering by p-separation in `g`.
    pub fn oracle(g: ChainGraph) -> Self {
        Self::with_backend(g.names().to_vec(), Backend::Oracle(g))
    }

    /// Fisher z-tests against a correlation matrix estimated from `n` rows.
    pub fn gaussian(names: Vec<String>, corr: DMatrix<f64>, n: usize, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if corr.nrows() != names.len() || corr.ncols() != names.len() {
            return Err(Error::Dataset("correlation matrix does not match the variables".into()));
        }
        Ok(Self::with_backend(names, Backend::Gaussian { corr, n, alpha }))
    }

    /// G² tests on discrete data.
    pub fn discrete(data: Dataset, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if data.kind() != DataKind::Discrete {
            return Err(Error::Dataset("the G² test needs discrete data".into()));
        }
        Ok(Self::with_backend(data.names().to_vec(), Backend::Discrete { data, alpha }))
    }

    /// Gaussian or G² source, depending on the kind of `data`.
    pub fn from_dataset(data: &Dataset, alpha: f64) -> Result<Self> {
        match data.kind() {
            DataKind::Continuous => Self::gaussian(
                data.names().to_vec(),
                data.correlation()?,
                data.n_rows(),
                alpha,
            ),
            DataKind::Discrete => Self::discrete(data.clone(), alpha),
        }
    }

    /// Source backed by a decision function; `decide(u, v, s)` is called with
    /// `u < v` and must return true for independence.
    pub fn from_fn<F>(names: Vec<String>, decide: F) -> Self
    where
        F: Fn(Vertex, Vertex, &VertexSet) -> bool + Send + Sync + 'static,
    {
        Self::with_backend(names, Backend::Custom(Box::new(decide)))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    /// Largest conditioning set the backend can evaluate, if bounded.
    pub fn max_conditioning(&self) -> Option<usize> {
        match &self.backend {
            Backend::Gaussian { n, .. } => Some(n.saturating_sub(4)),
            _ => None,
        }
    }

    /// Number of distinct queries evaluated so far.
    pub fn query_count(&self) -> usize {
        self.evaluations.load(Ordering::SeqCst)
    }

    /// Drops cached decisions and resets the counter.
    pub fn reset(&self) {
        self.cache.lock().expect("cache lock").clear();
        self.evaluations.store(0, Ordering::SeqCst);
    }

    fn check(&self, u: Vertex, v: Vertex, s: &VertexSet) -> Result<()> {
        let n = self.n_vars();
        if let Some(&w) = [u, v].iter().chain(s).find(|&&w| w >= n) {
            return Err(Error::UnknownVertex(format!("#{w}")));
        }
        if u == v || s.contains(&u) || s.contains(&v) {
            return Err(Error::InvalidQuery(
                "u and v must differ and lie outside the conditioning set".into(),
            ));
        }
        Ok(())
    }

    /// p-value of the test of `u ⊥ v | s`. Oracle and custom backends give
    /// 1 for independence and 0 otherwise. Not cached.
    pub fn p_value(&self, u: Vertex, v: Vertex, s: &VertexSet) -> Result<f64> {
        self.check(u, v, s)?;
        let (u, v) = (u.min(v), u.max(v));
        match &self.backend {
            Backend::Oracle(g) => Ok(indicator(separated(g, &[u].into(), &[v].into(), s))),
            Backend::Custom(decide) => Ok(indicator(decide(u, v, s))),
            Backend::Gaussian { corr, n, .. } => {
                fisher_z_p_value(partial_correlation(corr, u, v, s)?, *n, s.len())
            }
            Backend::Discrete { data, .. } => Ok(gsquare(data, u, v, s)?.p_value),
        }
    }

    fn decide(&self, u: Vertex, v: Vertex, s: &VertexSet) -> Result<bool> {
        match &self.backend {
            Backend::Oracle(g) => Ok(separated(g, &[u].into(), &[v].into(), s)),
            Backend::Custom(decide) => Ok(decide(u, v, s)),
            Backend::Gaussian { alpha, .. } | Backend::Discrete { alpha, .. } => {
                Ok(self.p_value(u, v, s)? > *alpha)
            }
        }
    }

    /// Stores a decision computed elsewhere, counting it like an evaluated
    /// query unless the key is already cached. Returns the cached decision.
    pub(crate) fn record(&self, u: Vertex, v: Vertex, s: &VertexSet, decision: bool) -> Result<bool> {
        self.check(u, v, s)?;
        let key: Key = (u.min(v), u.max(v), s.iter().copied().collect());
        let mut cache = self.cache.lock().expect("cache lock");
        Ok(*cache.entry(key).or_insert_with(|| {
            self.evaluations.fetch_add(1, Ordering::SeqCst);
            decision
        }))
    }

    /// True iff `u` and `v` are judged independent given `s`.
    pub fn independent(&self, u: Vertex, v: Vertex, s: &VertexSet) -> Result<bool> {
        self.check(u, v, s)?;
        let (u, v) = (u.min(v), u.max(v));
        let key: Key = (u, v, s.iter().copied().collect());
        if let Some(&hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(hit);
        }
        // Evaluated outside the lock; only the first insertion is counted.
        let decision = self.decide(u, v, s)?;
        let mut cache = self.cache.lock().expect("cache lock");
        if let std::collections::hash_map::Entry::Vacant(slot) = cache.entry(key) {
            slot.insert(decision);
            self.evaluations.fetch_add(1, Ordering::SeqCst);
        }
        Ok(decision)
    }
}

fn indicator(independent: bool) -> f64 {
    if independent {
        1.0
    } else {
        0.0
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::{p_separated_aug, SeparationQuery};
    use crate::synth::{random_amp_cg, GenConfig};
    use rayon::prelude::*;

    #[test]
    fn oracle_matches_augmentation_criterion() {
        let g: ChainGraph = "node X\nnode Y\nnode A\nnode B\nX -> A\nA -- B\nY -> B".parse().unwrap();
        let src = CiSource::oracle(g.clone());
        assert!(src.independent(0, 1, &[2].into()).unwrap());
        for seed in 0..20 {
            let g = random_amp_cg(&GenConfig::new(7, 2.0, seed)).unwrap();
            let src = CiSource::oracle(g.clone());
            for u in 0..7 {
                for v in 0..7 {
                    if u == v {
                        continue;
                    }
                    for w in 0..7 {
                        let s: VertexSet = if w == u || w == v { VertexSet::new() } else { [w].into() };
                        let q = SeparationQuery::pair(u, v, s.clone());
                        assert_eq!(src.independent(u, v, &s).unwrap(), p_separated_aug(&g, &q).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn cache_counts_distinct_queries() {
        let g: ChainGraph = "a -> b\nb -> c".parse().unwrap();
        let src = CiSource::oracle(g);
        assert!(!src.independent(0, 2, &VertexSet::new()).unwrap());
        assert!(!src.independent(2, 0, &VertexSet::new()).unwrap());
        assert!(src.independent(2, 0, &[1].into()).unwrap());
        assert_eq!(src.query_count(), 2);
        src.reset();
        assert_eq!(src.query_count(), 0);
        assert!(src.independent(0, 0, &VertexSet::new()).is_err());
        assert!(src.independent(0, 2, &[0].into()).is_err());
        assert!(src.independent(0, 7, &VertexSet::new()).is_err());
    }

    #[test]
    fn concurrent_queries_count_exactly() {
        let g = random_amp_cg(&GenConfig::new(9, 2.0, 3)).unwrap();
        let src = CiSource::oracle(g);
        let queries: Vec<(usize, usize)> = (0..9).flat_map(|u| (0..9).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
        let run = |src: &CiSource| -> Vec<bool> {
            queries
                .par_iter()
                .map(|&(u, v)| src.independent(u, v, &VertexSet::new()).unwrap())
                .collect()
        };
        let first = run(&src);
        assert_eq!(src.query_count(), 36);
        assert_eq!(run(&src), first);
        assert_eq!(src.query_count(), 36);
    }

    #[test]
    fn gaussian_zero_partial_correlation_is_independent() {
        let corr = DMatrix::from_row_slice(3, 3, &[1.0, 0.8, 0.64, 0.8, 1.0, 0.8, 0.64, 0.8, 1.0]);
        let names: Vec<String> = ["u", "m", "v"].map(String::from).to_vec();
        let src = CiSource::gaussian(names, corr, 100, 0.999).unwrap();
        assert!(src.independent(0, 2, &[1].into()).unwrap());
        assert!(!src.independent(0, 2, &VertexSet::new()).unwrap());
        assert!(matches!(
            CiSource::gaussian(vec!["a".into(), "b".into(), "c".into()], DMatrix::identity(3, 3), 4, 0.05)
                .unwrap()
                .independent(0, 1, &[2].into()),
            Err(Error::InsufficientSample { .. })
        ));
        assert!(CiSource::gaussian(vec!["a".into()], DMatrix::identity(1, 1), 10, 1.5).is_err());
    }

    #[test]
    fn decisions_are_monotone_in_alpha() {
        let corr = DMatrix::from_row_slice(3, 3, &[1.0, 0.1, 0.05, 0.1, 1.0, 0.2, 0.05, 0.2, 1.0]);
        let names: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        let mut last = true;
        for alpha in [0.001, 0.01, 0.05, 0.1, 0.2, 0.5, 0.9] {
            let src = CiSource::gaussian(names.clone(), corr.clone(), 300, alpha).unwrap();
            let now = src.independent(0, 1, &VertexSet::new()).unwrap();
            assert!(last || !now, "independence reappeared at alpha {alpha}");
            last = now;
        }
        assert!(!last);
    }

    #[test]
    fn discrete_source_detects_dependence() {
        let a: Vec<u32> = (0..1000).map(|i| (i * 7 % 3 == 0) as u32).collect();
        let d = Dataset::discrete(vec!["u".into(), "v".into()], vec![a.clone(), a], vec![2, 2]).unwrap();
        let src = CiSource::from_dataset(&d, 0.05).unwrap();
        assert!(!src.independent(0, 1, &VertexSet::new()).unwrap());
    }
}
