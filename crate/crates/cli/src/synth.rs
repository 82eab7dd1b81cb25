use std::path::PathBuf;

use ampcg::synth::{benchmark, derive_seed, parametrize, BenchGrid};
use ampcg::{metrics, random_amp_cg, GenConfig};
use clap::Args;

use crate::fields;
use crate::io::{json_doc, read_graph, read_text, write_out, Failure, Outcome};

#[derive(Args)]
pub struct GenArgs {
    /// Number of vertices
    #[arg(long)]
    p: usize,
    /// Expected vertex degree
    #[arg(long, default_value_t = 2.0)]
    degree: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

pub fn gen(args: &GenArgs) -> Outcome {
    let g = random_amp_cg(&GenConfig::new(args.p, args.degree, args.seed))?;
    let out = if args.json {
        json_doc(fields!("p" => args.p, "degree" => args.degree, "seed" => args.seed, "graph" => g.to_text()))
    } else {
        g.to_text().into_bytes()
    };
    write_out(args.out.as_deref(), &out)
}

#[derive(Args)]
pub struct SampleArgs {
    /// AMP chain graph to parametrize
    #[arg(long)]
    graph: String,
    /// Number of rows
    #[arg(long)]
    n: usize,
    /// Seeds both the parameters and the draws
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn sample(args: &SampleArgs) -> Outcome {
    let g = read_graph(&args.graph, true)?;
    let data = parametrize(&g, args.seed)?.sample(args.n, derive_seed(args.seed, &[args.n as u64]))?;
    let mut csv = Vec::new();
    data.write_csv(&mut csv)?;
    write_out(args.out.as_deref(), &csv)
}

#[derive(Args)]
pub struct EvalArgs {
    #[arg(long)]
    learned: String,
    #[arg(long)]
    truth: String,
    #[arg(long)]
    json: bool,
}

pub fn eval(args: &EvalArgs) -> Outcome {
    let learned = read_graph(&args.learned, false)?;
    let truth = read_graph(&args.truth, false)?;
    let m = metrics(&learned, &truth).map_err(Failure::input)?;
    let out = if args.json {
        let serde_json::Value::Object(map) = serde_json::to_value(&m).expect("serializable") else {
            unreachable!("metrics serialize to an object")
        };
        json_doc(map)
    } else {
        format!(
            "tp: {}\nfp: {}\ntn: {}\nfn: {}\ntpr: {:.4}\nfpr: {:.4}\ntdr: {:.4}\nacc: {:.4}\nshd: {}\n",
            m.tp, m.fp, m.tn, m.fn_, m.tpr, m.fpr, m.tdr, m.acc, m.shd
        )
        .into_bytes()
    };
    write_out(None, &out)
}

#[derive(Args)]
pub struct BenchArgs {
    /// Grid file of key=value lines or JSON; built-in defaults otherwise
    #[arg(long)]
    grid: Option<String>,
    /// Master seed, overriding the grid's
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// JSON-lines report destination (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a CSV summary here
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Record wall-clock time per run (makes reports non-reproducible)
    #[arg(long)]
    timings: bool,
}

pub fn bench(args: &BenchArgs) -> Outcome {
    let mut grid = match &args.grid {
        Some(path) => BenchGrid::parse(&read_text(path)?).map_err(|e| Failure::Input(format!("{path}: {e}")))?,
        None => BenchGrid::default(),
    };
    if let Some(seed) = args.seed {
        grid.seed = seed;
    }
    grid.timings |= args.timings;
    if args.threads == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    let report = if args.threads == 1 {
        benchmark(&grid, false)?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build()
            .map_err(|e| Failure::Usage(e.to_string()))?;
        pool.install(|| benchmark(&grid, true))?
    };
    let mut lines = Vec::new();
    report.write_jsonl(&mut lines)?;
    write_out(args.out.as_deref(), &lines)?;
    if let Some(path) = &args.summary {
        let mut csv = Vec::new();
        report.write_summary_csv(&mut csv)?;
        write_out(Some(path), &csv)?;
    }
    Ok(())
}
