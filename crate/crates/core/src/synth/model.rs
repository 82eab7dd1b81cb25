use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::citest::Dataset;
use crate::error::{Error, Result};
use crate::graph::{ChainGraph, Vertex};

/// Range of regression coefficient magnitudes.
pub const COEF_RANGE: (f64, f64) = (0.5, 1.5);
/// Range of off-diagonal concentration magnitudes.
pub const CONCENTRATION_RANGE: (f64, f64) = (0.1, 0.4);
/// Margin by which a raised concentration diagonal exceeds its row sum.
const DOMINANCE_MARGIN: f64 = 0.1;

/// Parameters of one chain component: `x_τ = B x_pa(τ) + ε`, `ε ~ N(0, Σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentModel {
    pub vertices: Vec<Vertex>,
    /// `pa(τ)`, sorted.
    pub parents: Vec<Vertex>,
    /// `|τ| × |pa(τ)|`, zero unless the column is a parent of the row.
    pub b: DMatrix<f64>,
    /// Inverse of `Σ`, zero off the undirected edges of the component.
    pub concentration: DMatrix<f64>,
    pub sigma: DMatrix<f64>,
    cholesky: DMatrix<f64>,
}

/// A block-recursive Gaussian distribution Markov to an AMP chain graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianCGModel {
    pub graph: ChainGraph,
    /// Components in topological order.
    pub components: Vec<ComponentModel>,
}

fn magnitude<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    let m = rng.random_range(lo..=hi);
    if rng.random_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Draws parameters for `g`. Regression coefficients have magnitudes in
/// [`COEF_RANGE`] with random signs. Each component concentration matrix
/// has unit diagonal and off-diagonals in [`CONCENTRATION_RANGE`] at the
/// undirected edges; a diagonal entry is raised above its row's absolute
/// sum when needed, so the matrix is strictly diagonally dominant.
pub fn parametrize(g: &ChainGraph, seed: u64) -> Result<GaussianCGModel> {
    let order = g.component_order().ok_or(Error::NotAmpChainGraph)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut components = Vec::with_capacity(order.len());
    for vertices in order {
        let mut parents: Vec<Vertex> = vertices.iter().flat_map(|&v| g.parents(v).iter().copied()).collect();
        parents.sort_unstable();
        parents.dedup();
        let b = DMatrix::from_fn(vertices.len(), parents.len(), |i, j| {
            if g.parents(vertices[i]).contains(&parents[j]) {
                magnitude(&mut rng, COEF_RANGE)
            } else {
                0.0
            }
        });
        let k = vertices.len();
        let mut omega = DMatrix::identity(k, k);
        for i in 0..k {
            for j in i + 1..k {
                if g.neighbors(vertices[i]).contains(&vertices[j]) {
                    let w = magnitude(&mut rng, CONCENTRATION_RANGE);
                    omega[(i, j)] = w;
                    omega[(j, i)] = w;
                }
            }
        }
        for i in 0..k {
            let off: f64 = (0..k).filter(|&j| j != i).map(|j| omega[(i, j)].abs()).sum();
            if off >= 1.0 {
                omega[(i, i)] = off + DOMINANCE_MARGIN;
            }
        }
        let sigma = omega.clone().cholesky().expect("diagonally dominant").inverse();
        let cholesky = sigma.clone().cholesky().expect("inverse of a positive definite matrix").l();
        components.push(ComponentModel { vertices, parents, b, concentration: omega, sigma, cholesky });
    }
    Ok(GaussianCGModel { graph: g.clone(), components })
}

impl GaussianCGModel {
    /// Joint covariance matrix over all vertices.
    pub fn covariance(&self) -> DMatrix<f64> {
        let n = self.graph.n();
        let mut cov = DMatrix::zeros(n, n);
        let mut done: Vec<Vertex> = Vec::new();
        for c in &self.components {
            // Cov(x_τ, x_w) = B Cov(x_pa, x_w) for every earlier w.
            for (i, &v) in c.vertices.iter().enumerate() {
                for &w in &done {
                    let x: f64 = c.parents.iter().enumerate().map(|(j, &q)| c.b[(i, j)] * cov[(q, w)]).sum();
                    cov[(v, w)] = x;
                    cov[(w, v)] = x;
                }
            }
            for (i, &v) in c.vertices.iter().enumerate() {
                for (k, &u) in c.vertices.iter().enumerate() {
                    let mut x = c.sigma[(i, k)];
                    for (j, &q) in c.parents.iter().enumerate() {
                        x += c.b[(i, j)] * cov[(q, u)];
                    }
                    cov[(v, u)] = x;
                }
            }
            // Symmetrize the diagonal block against rounding.
            for &v in &c.vertices {
                for &u in &c.vertices {
                    let x = 0.5 * (cov[(v, u)] + cov[(u, v)]);
                    cov[(v, u)] = x;
                    cov[(u, v)] = x;
                }
            }
            done.extend(&c.vertices);
        }
        cov
    }

    /// `n` i.i.d. draws, component by component in topological order.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::Config("sample size must be at least 1".into()));
        }
        let p = self.graph.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut columns = vec![vec![0.0; n]; p];
        for row in 0..n {
            for c in &self.components {
                let z = DVector::from_fn(c.vertices.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
                let eps = &c.cholesky * z;
                for (i, &v) in c.vertices.iter().enumerate() {
                    let mean: f64 = c.parents.iter().enumerate().map(|(j, &q)| c.b[(i, j)] * columns[q][row]).sum();
                    columns[v][row] = mean + eps[i];
                }
            }
        }
        Dataset::continuous(self.graph.names().to_vec(), columns)
    }
}
