use nalgebra::DMatrix;

use crate::citest::stats::{fisher_z_p_value, RIDGE};
use crate::citest::{Backend, CiSource};
use crate::error::{Error, Result};
use crate::graph::{ChainGraph, UndirectedGraph, VertexSet};

/// Largest number of discrete variables for which the full-conditional UIG
/// is built by default.
pub const DISCRETE_FULL_CONDITIONAL_MAX: usize = 12;

/// How the undirected independence graph is obtained.
#[derive(Debug, Clone)]
pub enum UigMethod {
    /// Zero pattern of the concentration matrix, each entry tested with
    /// Fisher's z. Gaussian sources only.
    GaussianConcentration,
    /// `u ⊥ v | V \ {u, v}` asked of the source for every pair.
    FullConditional,
    /// Augmented graph of a known chain graph.
    Oracle(ChainGraph),
    /// A graph supplied by the caller.
    Given(UndirectedGraph),
}

impl UigMethod {
    /// The method used when none is named: the concentration graph for
    /// Gaussian sources, full-conditional tests otherwise. Discrete sources
    /// with more than [`DISCRETE_FULL_CONDITIONAL_MAX`] variables need an
    /// explicit graph.
    pub fn default_for(src: &CiSource) -> Result<UigMethod> {
        match src.backend() {
            Backend::Gaussian { .. } => Ok(UigMethod::GaussianConcentration),
            Backend::Discrete { .. } if src.n_vars() > DISCRETE_FULL_CONDITIONAL_MAX => Err(Error::Config(format!(
                "full-conditional tests are unreliable beyond {DISCRETE_FULL_CONDITIONAL_MAX} discrete variables; \
                 supply a UIG file or an oracle"
            ))),
            _ => Ok(UigMethod::FullConditional),
        }
    }
}

/// Builds an undirected independence graph over the source's variables.
///
/// The test-based methods prime the source's cache with their decisions, so
/// they count towards its query total.
pub fn build_uig(src: &CiSource, method: &UigMethod) -> Result<UndirectedGraph> {
    let names = src.names().to_vec();
    let p = names.len();
    let rest = |u: usize, v: usize| -> VertexSet { (0..p).filter(|&w| w != u && w != v).collect() };
    match method {
        UigMethod::Oracle(g) => g.augment().reindexed(&names).ok_or(Error::VertexMismatch),
        UigMethod::Given(g) => g.reindexed(&names).ok_or(Error::VertexMismatch),
        UigMethod::FullConditional => {
            let mut g = UndirectedGraph::new(names);
            for u in 0..p {
                for v in u + 1..p {
                    if !src.independent(u, v, &rest(u, v))? {
                        g.add_edge(u, v);
                    }
                }
            }
            Ok(g)
        }
        UigMethod::GaussianConcentration => {
            let Backend::Gaussian { corr, n, alpha } = src.backend() else {
                return Err(Error::Config("the concentration UIG needs a Gaussian source".into()));
            };
            let k = p.saturating_sub(2);
            if *n <= k + 3 && p >= 2 {
                return Err(Error::InsufficientSample { n: *n, conditioning: k });
            }
            let precision = invert(corr)?;
            let mut g = UndirectedGraph::new(names);
            for u in 0..p {
                for v in u + 1..p {
                    let rho = -precision[(u, v)] / (precision[(u, u)] * precision[(v, v)]).sqrt();
                    let independent = fisher_z_p_value(rho.clamp(-1.0, 1.0), *n, k)? > *alpha;
                    if !src.record(u, v, &rest(u, v), independent)? {
                        g.add_edge(u, v);
                    }
                }
            }
            Ok(g)
        }
    }
}

fn invert(corr: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let p = corr.nrows();
    match corr.clone().cholesky() {
        Some(ch) => Ok(ch.inverse()),
        None => Ok((corr + DMatrix::identity(p, p) * RIDGE)
            .cholesky()
            .ok_or(Error::SingularMatrix)?
            .inverse()),
    }
}
