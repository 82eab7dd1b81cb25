//! Shared inputs for the criterion benchmarks in `benches/`.

use ampcg::synth::parametrize;
use ampcg::{random_amp_cg, ChainGraph, CiSource, GenConfig};

/// `count` seeded random chain graphs.
pub fn graphs(p: usize, degree: f64, count: u64) -> Vec<ChainGraph> {
    (0..count).map(|seed| random_amp_cg(&GenConfig::new(p, degree, seed)).unwrap()).collect()
}

/// A Fisher-z source on `n` rows drawn from a random parametrization of `g`.
pub fn gaussian_source(g: &ChainGraph, n: usize, alpha: f64, seed: u64) -> CiSource {
    let data = parametrize(g, seed).unwrap().sample(n, seed).unwrap();
    CiSource::gaussian(data.names().to_vec(), data.correlation().unwrap(), n, alpha).unwrap()
}

/// Rebuilds a source with an empty cache, so every iteration pays for its
/// tests.
pub fn fresh(src: &CiSource) -> CiSource {
    match src.backend() {
        ampcg::citest::Backend::Gaussian { corr, n, alpha } => {
            CiSource::gaussian(src.names().to_vec(), corr.clone(), *n, *alpha).unwrap()
        }
        ampcg::citest::Backend::Oracle(g) => CiSource::oracle(g.clone()),
        _ => panic!("unsupported backend"),
    }
}
