use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ChainGraph;

/// Recovery scores of a learned graph against the truth.
///
/// Rates with an empty denominator are reported as their ideal value:
/// `tpr = 1` without true edges, `fpr = 0` without true gaps and `tdr = 1`
/// without learned edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tpr: f64,
    pub fpr: f64,
    pub tdr: f64,
    pub acc: f64,
    pub shd: usize,
    pub query_count: usize,
    /// Wall-clock time; left out of reports unless timing was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

fn ratio(num: usize, den: usize, empty: f64) -> f64 {
    if den == 0 {
        empty
    } else {
        num as f64 / den as f64
    }
}

/// Skeleton rates and structural Hamming distance of `learned` against
/// `truth`. A vertex pair adds 1 to the SHD when exactly one graph joins
/// it, or when both do with different edge types.
pub fn metrics(learned: &ChainGraph, truth: &ChainGraph) -> Result<MetricsReport> {
    let learned = learned.reindexed(truth.names()).map_err(|_| Error::VertexMismatch)?;
    let (mut tp, mut fp, mut tn, mut fn_, mut shd) = (0, 0, 0, 0, 0);
    let n = truth.n();
    for a in 0..n {
        for b in a + 1..n {
            let (l, t) = (learned.link(a, b), truth.link(a, b));
            match (learned.adjacent(a, b), truth.adjacent(a, b)) {
                (true, true) => {
                    tp += 1;
                    shd += usize::from(l != t);
                }
                (true, false) => {
                    fp += 1;
                    shd += 1;
                }
                (false, true) => {
                    fn_ += 1;
                    shd += 1;
                }
                (false, false) => tn += 1,
            }
        }
    }
    Ok(MetricsReport {
        tp,
        fp,
        tn,
        fn_,
        tpr: ratio(tp, tp + fn_, 1.0),
        fpr: ratio(fp, fp + tn, 0.0),
        tdr: ratio(tp, tp + fp, 1.0),
        acc: ratio(tp + tn, tp + fp + tn + fn_, 1.0),
        shd,
        query_count: 0,
        elapsed_ms: None,
    })
}
