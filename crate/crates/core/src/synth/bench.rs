use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{metrics, parametrize, random_amp_cg, GenConfig, MetricsReport};
use crate::algorithm::Algorithm;
use crate::citest::CiSource;
use crate::error::{Error, Result};
use crate::graph::ChainGraph;
use crate::learn::{LearnConfig, Variant};

/// Where a benchmark run gets its independence decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchSource {
    /// Fisher's z on a sample drawn from a random Gaussian parametrization.
    Gaussian,
    /// p-separation in the true graph; `n` and `alpha` are ignored.
    Oracle,
}

/// A benchmark grid: every combination of the listed values is run `reps`
/// times.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchGrid {
    pub p: Vec<usize>,
    pub degree: Vec<f64>,
    pub n: Vec<usize>,
    pub alpha: Vec<f64>,
    pub algos: Vec<Algorithm>,
    pub reps: usize,
    pub seed: u64,
    pub source: BenchSource,
    pub max_sepset_size: Option<usize>,
    /// Record wall-clock times, which makes reports irreproducible.
    pub timings: bool,
}

impl Default for BenchGrid {
    fn default() -> Self {
        BenchGrid {
            p: vec![50],
            degree: vec![2.0],
            n: vec![500, 1000, 5000, 10000],
            alpha: vec![0.005],
            algos: Algorithm::ALL.to_vec(),
            reps: 10,
            seed: 1,
            source: BenchSource::Gaussian,
            max_sepset_size: None,
            timings: false,
        }
    }
}

fn list<T: std::str::FromStr>(key: &str, values: &[String]) -> Result<Vec<T>> {
    values
        .iter()
        .map(|v| v.parse().map_err(|_| Error::Config(format!("bad value `{v}` for `{key}`"))))
        .collect()
}

fn single<T: std::str::FromStr>(key: &str, values: &[String]) -> Result<T> {
    match values {
        [v] => v.parse().map_err(|_| Error::Config(format!("bad value `{v}` for `{key}`"))),
        _ => Err(Error::Config(format!("`{key}` takes one value"))),
    }
}

impl BenchGrid {
    /// Reads a grid from `key = value` lines (lists comma-separated, `#`
    /// comments) or from a JSON object with the same keys. Missing keys keep
    /// their defaults.
    pub fn parse(text: &str) -> Result<BenchGrid> {
        let mut entries: Vec<(String, Vec<String>)> = Vec::new();
        if text.trim_start().starts_with('{') {
            let value: serde_json::Value = serde_json::from_str(text)?;
            let obj = value.as_object().ok_or_else(|| Error::Config("grid must be a JSON object".into()))?;
            for (k, v) in obj {
                let scalar = |v: &serde_json::Value| match v {
                    serde_json::Value::String(s) => Ok(s.clone()),
                    serde_json::Value::Number(n) => Ok(n.to_string()),
                    serde_json::Value::Bool(b) => Ok(b.to_string()),
                    _ => Err(Error::Config(format!("bad value for `{k}`"))),
                };
                let values = match v {
                    serde_json::Value::Array(items) => items.iter().map(scalar).collect::<Result<_>>()?,
                    other => vec![scalar(other)?],
                };
                entries.push((k.clone(), values));
            }
        } else {
            for (i, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or(Error::Parse {
                    line: i + 1,
                    message: "expected `key = value`".into(),
                })?;
                let values = v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                entries.push((k.trim().to_string(), values));
            }
        }
        let mut grid = BenchGrid::default();
        for (k, v) in &entries {
            match k.as_str() {
                "p" => grid.p = list(k, v)?,
                "degree" | "N" => grid.degree = list(k, v)?,
                "n" => grid.n = list(k, v)?,
                "alpha" => grid.alpha = list(k, v)?,
                "algos" => grid.algos = list(k, v)?,
                "reps" => grid.reps = single(k, v)?,
                "seed" => grid.seed = single(k, v)?,
                "source" => {
                    grid.source = match single::<String>(k, v)?.as_str() {
                        "gaussian" => BenchSource::Gaussian,
                        "oracle" => BenchSource::Oracle,
                        other => return Err(Error::Config(format!("unknown source `{other}`"))),
                    }
                }
                "max_sepset_size" => grid.max_sepset_size = Some(single(k, v)?),
                "timings" => grid.timings = single(k, v)?,
                other => return Err(Error::Config(format!("unknown grid key `{other}`"))),
            }
        }
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        for &p in &self.p {
            for &degree in &self.degree {
                GenConfig::new(p, degree, 0).validate()?;
            }
        }
        if self.n.contains(&0) {
            return Err(Error::Config("sample sizes must be positive".into()));
        }
        if let Some(a) = self.alpha.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {a}")));
        }
        Ok(())
    }
}

/// Mixes `parts` into `seed` with the splitmix64 finalizer, giving every
/// graph and sample its own generator seed.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    let mut x = seed;
    for &part in parts {
        x = x.wrapping_add(part).wrapping_add(0x9e37_79b9_7f4a_7c15);
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^= x >> 31;
    }
    x
}

/// One learner run on one replicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub p: usize,
    pub degree: f64,
    pub n: usize,
    pub alpha: f64,
    pub algo: Algorithm,
    pub rep: usize,
    pub graph_seed: u64,
    pub sample_seed: u64,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub sd: f64,
}

impl Stat {
    pub fn of(xs: &[f64]) -> Stat {
        if xs.is_empty() {
            return Stat { mean: f64::NAN, sd: f64::NAN };
        }
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let sd = if xs.len() < 2 {
            0.0
        } else {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
        };
        Stat { mean, sd }
    }
}

/// Aggregate over the replicates of one grid cell and learner.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub p: usize,
    pub degree: f64,
    pub n: usize,
    pub alpha: f64,
    pub algo: Algorithm,
    pub runs: usize,
    pub failures: usize,
    pub tpr: Stat,
    pub fpr: Stat,
    pub tdr: Stat,
    pub acc: Stat,
    pub shd: Stat,
    pub query_count: Stat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub runs: Vec<RunRecord>,
    pub summary: Vec<CellSummary>,
}

struct Job {
    p: usize,
    degree: f64,
    rep: usize,
    n: usize,
}

fn run_job(grid: &BenchGrid, job: &Job) -> Vec<RunRecord> {
    let graph_seed = derive_seed(grid.seed, &[job.p as u64, job.degree.to_bits(), job.rep as u64]);
    let sample_seed = derive_seed(graph_seed, &[job.n as u64]);
    let record = |alpha: f64, algo: Algorithm, outcome: Result<MetricsReport>| {
        let (metrics, error) = match outcome {
            Ok(m) => (Some(m), None),
            Err(e) => (None, Some(e.to_string())),
        };
        RunRecord { p: job.p, degree: job.degree, n: job.n, alpha, algo, rep: job.rep, graph_seed, sample_seed, metrics, error }
    };
    let prepared = (|| -> Result<(ChainGraph, Option<(crate::citest::Dataset, nalgebra::DMatrix<f64>)>)> {
        let truth = random_amp_cg(&GenConfig::new(job.p, job.degree, graph_seed))?;
        if grid.source == BenchSource::Oracle {
            return Ok((truth, None));
        }
        let data = parametrize(&truth, graph_seed)?.sample(job.n, sample_seed)?;
        let corr = data.correlation()?;
        Ok((truth, Some((data, corr))))
    })();
    let mut out = Vec::new();
    let (truth, sample) = match prepared {
        Ok(x) => x,
        Err(e) => {
            let msg = e.to_string();
            for &alpha in &grid.alpha {
                for &algo in &grid.algos {
                    out.push(record(alpha, algo, Err(Error::Config(msg.clone()))));
                }
            }
            return out;
        }
    };
    let mut cfg = LearnConfig::new(Variant::Stable);
    cfg.max_sepset_size = grid.max_sepset_size;
    for &alpha in &grid.alpha {
        for &algo in &grid.algos {
            let outcome = (|| -> Result<MetricsReport> {
                let src = match &sample {
                    None => CiSource::oracle(truth.clone()),
                    Some((data, corr)) => CiSource::gaussian(data.names().to_vec(), corr.clone(), data.n_rows(), alpha)?,
                };
                let start = Instant::now();
                let learned = algo.run(&src, &cfg, None)?;
                let elapsed = start.elapsed().as_millis() as u64;
                let mut m = metrics(&learned.graph, &truth)?;
                m.query_count = src.query_count();
                m.elapsed_ms = grid.timings.then_some(elapsed);
                Ok(m)
            })();
            out.push(record(alpha, algo, outcome));
        }
    }
    out
}

/// Runs the grid. Replicates are independent jobs with their own seeds, so
/// `parallel` does not change the report.
pub fn benchmark(grid: &BenchGrid, parallel: bool) -> Result<BenchReport> {
    grid.validate()?;
    let mut jobs = Vec::new();
    for &p in &grid.p {
        for &degree in &grid.degree {
            for &n in &grid.n {
                for rep in 0..grid.reps {
                    jobs.push(Job { p, degree, rep, n });
                }
            }
        }
    }
    let runs: Vec<RunRecord> = if parallel {
        jobs.par_iter().flat_map_iter(|j| run_job(grid, j)).collect()
    } else {
        jobs.iter().flat_map(|j| run_job(grid, j)).collect()
    };
    let mut runs = runs;
    let algo_rank = |a: Algorithm| grid.algos.iter().position(|&b| b == a).unwrap_or(usize::MAX);
    let alpha_rank = |a: f64| grid.alpha.iter().position(|&b| b == a).unwrap_or(usize::MAX);
    // Jobs come out grouped by (p, degree, n, rep); regroup by cell.
    runs.sort_by_key(|r| {
        let p = grid.p.iter().position(|&x| x == r.p);
        let d = grid.degree.iter().position(|&x| x == r.degree);
        let n = grid.n.iter().position(|&x| x == r.n);
        (p, d, n, alpha_rank(r.alpha), algo_rank(r.algo), r.rep)
    });
    let mut cells: Vec<Vec<&RunRecord>> = Vec::new();
    let mut keys: Vec<(usize, f64, usize, f64, Algorithm)> = Vec::new();
    for r in &runs {
        let key = (r.p, r.degree, r.n, r.alpha, r.algo);
        let idx = match keys.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                keys.push(key);
                cells.push(Vec::new());
                keys.len() - 1
            }
        };
        cells[idx].push(r);
    }
    let summary = keys
        .iter()
        .enumerate()
        .map(|(i, &(p, degree, n, alpha, algo))| {
            let rs = &cells[i];
            let ok: Vec<&MetricsReport> = rs.iter().filter_map(|r| r.metrics.as_ref()).collect();
            let stat = |f: &dyn Fn(&MetricsReport) -> f64| Stat::of(&ok.iter().map(|m| f(m)).collect::<Vec<_>>());
            CellSummary {
                p,
                degree,
                n,
                alpha,
                algo,
                runs: rs.len(),
                failures: rs.len() - ok.len(),
                tpr: stat(&|m| m.tpr),
                fpr: stat(&|m| m.fpr),
                tdr: stat(&|m| m.tdr),
                acc: stat(&|m| m.acc),
                shd: stat(&|m| m.shd as f64),
                query_count: stat(&|m| m.query_count as f64),
            }
        })
        .collect();
    Ok(BenchReport { runs, summary })
}

impl BenchReport {
    /// One JSON object per run, then one per summary cell, each tagged
    /// with `"kind"` and `"schema": 1`.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for r in &self.runs {
            let mut v = serde_json::to_value(r)?;
            v["kind"] = "run".into();
            v["schema"] = 1.into();
            writeln!(w, "{}", serde_json::to_string(&v)?)?;
        }
        for s in &self.summary {
            let mut v = serde_json::to_value(s)?;
            v["kind"] = "summary".into();
            v["schema"] = 1.into();
            writeln!(w, "{}", serde_json::to_string(&v)?)?;
        }
        Ok(())
    }

    /// Summary table with one row per cell and learner.
    pub fn write_summary_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "p", "degree", "n", "alpha", "algo", "runs", "failures", "tpr_mean", "tpr_sd", "fpr_mean", "fpr_sd",
            "tdr_mean", "tdr_sd", "acc_mean", "acc_sd", "shd_mean", "shd_sd", "queries_mean", "queries_sd",
        ])?;
        for s in &self.summary {
            let mut row = vec![
                s.p.to_string(),
                s.degree.to_string(),
                s.n.to_string(),
                s.alpha.to_string(),
                s.algo.to_string(),
                s.runs.to_string(),
                s.failures.to_string(),
            ];
            for st in [s.tpr, s.fpr, s.tdr, s.acc, s.shd, s.query_count] {
                row.push(st.mean.to_string());
                row.push(st.sd.to_string());
            }
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}
