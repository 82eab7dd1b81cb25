//! Synthetic benchmarks: random chain graphs, Gaussian models, sampling and
//! recovery metrics.

mod bench;
mod generate;
mod metrics;
mod model;

pub use bench::{benchmark, derive_seed, BenchGrid, BenchReport, BenchSource, CellSummary, RunRecord, Stat};
pub use generate::{random_amp_cg, GenConfig};
pub use metrics::{metrics, MetricsReport};
pub use model::{parametrize, ComponentModel, GaussianCGModel, COEF_RANGE, CONCENTRATION_RANGE};
