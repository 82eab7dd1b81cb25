use std::collections::BTreeMap;

use nalgebra::DMatrix;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

use super::Dataset;
use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet};

/// Ridge added to a correlation submatrix that fails to factorize.
pub const RIDGE: f64 = 1e-10;
/// Largest magnitude of a partial correlation fed to the z-transform.
pub const RHO_CLAMP: f64 = 1.0 - 1e-7;

/// Partial correlation of `u` and `v` given `s`, from the inverse of the
/// correlation submatrix over `{u, v} ∪ s`.
pub fn partial_correlation(corr: &DMatrix<f64>, u: Vertex, v: Vertex, s: &VertexSet) -> Result<f64> {
    if s.is_empty() {
        return Ok(corr[(u, v)].clamp(-1.0, 1.0));
    }
    let idx: Vec<usize> = [u, v].into_iter().chain(s.iter().copied()).collect();
    let k = idx.len();
    let sub = DMatrix::from_fn(k, k, |i, j| corr[(idx[i], idx[j])]);
    let inverse = match sub.clone().cholesky() {
        Some(ch) => ch.inverse(),
        None => (sub + DMatrix::identity(k, k) * RIDGE)
            .cholesky()
            .ok_or(Error::SingularMatrix)?
            .inverse(),
    };
    let denom = (inverse[(0, 0)] * inverse[(1, 1)]).sqrt();
    if !(denom.is_finite() && denom > 0.0) {
        return Err(Error::SingularMatrix);
    }
    Ok((-inverse[(0, 1)] / denom).clamp(-1.0, 1.0))
}

/// Two-sided p-value of Fisher's z-test for a partial correlation `rho`
/// estimated from `n` samples with a conditioning set of size `k`.
pub fn fisher_z_p_value(rho: f64, n: usize, k: usize) -> Result<f64> {
    if n <= k + 3 {
        return Err(Error::InsufficientSample { n, conditioning: k });
    }
    let rho = rho.clamp(-RHO_CLAMP, RHO_CLAMP);
    let statistic = ((n - k - 3) as f64).sqrt() * rho.atanh().abs();
    Ok(erfc(statistic / std::f64::consts::SQRT_2))
}

/// Result of a G² test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GSquare {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
}

/// Likelihood-ratio test of `u ⊥ v | s` on discrete data, summing
/// `2·obs·ln(obs/exp)` over the strata defined by `s`.
pub fn gsquare(data: &Dataset, u: Vertex, v: Vertex, s: &VertexSet) -> Result<GSquare> {
    let (values, levels) = data
        .discrete_columns()
        .ok_or_else(|| Error::Dataset("the G² test needs discrete data".into()))?;
    let (ku, kv) = (levels[u], levels[v]);
    let dof = s
        .iter()
        .try_fold(((ku - 1) * (kv - 1)) as u64, |acc, &w| acc.checked_mul(levels[w] as u64))
        .ok_or_else(|| Error::DegenerateTest("degrees of freedom overflow".into()))?;
    if dof == 0 {
        return Err(Error::DegenerateTest("zero degrees of freedom".into()));
    }
    let mut strata: BTreeMap<Vec<u32>, Vec<u64>> = BTreeMap::new();
    for i in 0..data.n_rows() {
        let key: Vec<u32> = s.iter().map(|&w| values[w][i]).collect();
        let table = strata.entry(key).or_insert_with(|| vec![0; ku * kv]);
        table[values[u][i] as usize * kv + values[v][i] as usize] += 1;
    }
    let mut statistic = 0.0;
    for table in strata.values() {
        let total: u64 = table.iter().sum();
        let rows: Vec<u64> = (0..ku).map(|a| (0..kv).map(|b| table[a * kv + b]).sum()).collect();
        let cols: Vec<u64> = (0..kv).map(|b| (0..ku).map(|a| table[a * kv + b]).sum()).collect();
        for a in 0..ku {
            for b in 0..kv {
                let observed = table[a * kv + b];
                if observed == 0 {
                    continue;
                }
                let expected = rows[a] as f64 * cols[b] as f64 / total as f64;
                statistic += 2.0 * observed as f64 * (observed as f64 / expected).ln();
            }
        }
    }
    let statistic = statistic.max(0.0);
    let chi = ChiSquared::new(dof as f64).map_err(|e| Error::DegenerateTest(e.to_string()))?;
    Ok(GSquare {
        statistic,
        dof,
        p_value: chi.sf(statistic),
    })
}
