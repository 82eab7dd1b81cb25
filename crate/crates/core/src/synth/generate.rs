use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ChainGraph;

/// Parameters of the random chain graph generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    /// Number of vertices.
    pub p: usize,
    /// Expected number of adjacent vertices per vertex.
    pub degree: f64,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(p: usize, degree: f64, seed: u64) -> Self {
        GenConfig { p, degree, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::Config(format!("p must be at least 2, got {}", self.p)));
        }
        if !(self.degree > 0.0 && self.degree <= (self.p - 1) as f64) {
            return Err(Error::Config(format!(
                "degree must lie in (0, {}], got {}",
                self.p - 1,
                self.degree
            )));
        }
        Ok(())
    }
}

/// Chain component (0-based) of the 1-based vertex `i` when `[1, p]` is cut
/// into `k` equal-length pieces.
pub(crate) fn component_of(i: usize, p: usize, k: usize) -> usize {
    ((i - 1) * k / (p - 1)).min(k - 1)
}

/// Draws a random AMP chain graph on vertices `x1 .. xp`.
///
/// Each lower-triangle pair is adjacent with probability `N/(p-1)`. A
/// component count `k` is drawn uniformly from `1..=p`, the index range is
/// split into `k` equal pieces, pairs inside a piece become undirected edges
/// and pairs across pieces point from the earlier piece to the later one.
pub fn random_amp_cg(cfg: &GenConfig) -> Result<ChainGraph> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(random_amp_cg_with(cfg.p, cfg.degree, &mut rng))
}

pub(crate) fn random_amp_cg_with<R: Rng>(p: usize, degree: f64, rng: &mut R) -> ChainGraph {
    let s = degree / (p - 1) as f64;
    let mut adjacent = vec![false; p * p];
    for i in 0..p {
        for j in 0..i {
            adjacent[i * p + j] = rng.random_bool(s);
        }
    }
    let k = rng.random_range(1..=p);
    let mut g = ChainGraph::new((1..=p).map(|i| format!("x{i}"))).expect("distinct names");
    for i in 0..p {
        for j in 0..i {
            if !adjacent[i * p + j] {
                continue;
            }
            let (ci, cj) = (component_of(i + 1, p, k), component_of(j + 1, p, k));
            if ci == cj {
                g.add_undirected(j, i).expect("fresh pair");
            } else {
                g.add_directed(j, i).expect("fresh pair");
            }
        }
    }
    g
}
