use std::path::PathBuf;
use std::time::Instant;

use ampcg::citest::{DataKind, Dataset};
use ampcg::lcd::lcd_amp;
use ampcg::{Algorithm, ChainGraph, CiSource, LearnConfig, Learned, UigMethod, Variant};
use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use crate::fields;
use crate::io::{json_doc, name_list, read_graph, set_names, write_out, Failure, Outcome};

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    Continuous,
    Discrete,
}

#[derive(Args)]
pub struct LearnArgs {
    /// CSV dataset with a header row (`-` for stdin)
    #[arg(long, conflicts_with = "oracle", required_unless_present = "oracle")]
    data: Option<String>,
    /// Answer independence queries by p-separation in this graph
    #[arg(long)]
    oracle: Option<String>,
    /// Override the detected data kind
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// pc, stable, conservative, stable-conservative or lcd
    #[arg(long, default_value = "stable")]
    algo: String,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Variable order, comma-separated
    #[arg(long)]
    order: Option<String>,
    /// Largest conditioning set to try
    #[arg(long)]
    max_sepset: Option<usize>,
    /// UIG for lcd: gaussian, full-cond, oracle or file:PATH
    #[arg(long)]
    uig: Option<String>,
    /// Write the lcd separation tree as JSON
    #[arg(long)]
    emit_tree: Option<PathBuf>,
    /// Learned graph destination (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the JSON run report here
    #[arg(long)]
    report: Option<PathBuf>,
    /// Include wall-clock time in the report
    #[arg(long)]
    timings: bool,
    /// Print the JSON report on stdout instead of the graph
    #[arg(long)]
    json: bool,
}

fn source(args: &LearnArgs) -> Outcome<(CiSource, Option<ChainGraph>)> {
    if let Some(path) = &args.oracle {
        let g = read_graph(path, true)?;
        return Ok((CiSource::oracle(g.clone()), Some(g)));
    }
    let path = args.data.as_deref().expect("clap requires --data or --oracle");
    let text = crate::io::read_text(path)?;
    let kind = args.kind.map(|k| match k {
        Kind::Continuous => DataKind::Continuous,
        Kind::Discrete => DataKind::Discrete,
    });
    let data = Dataset::from_csv(text.as_bytes(), kind).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    Ok((CiSource::from_dataset(&data, args.alpha)?, None))
}

fn uig_method(spec: &str, src: &CiSource, truth: Option<&ChainGraph>) -> Outcome<UigMethod> {
    match spec {
        "gaussian" => Ok(UigMethod::GaussianConcentration),
        "full-cond" => Ok(UigMethod::FullConditional),
        "oracle" => truth
            .map(|g| UigMethod::Oracle(g.clone()))
            .ok_or_else(|| Failure::Usage("--uig oracle needs --oracle".into())),
        _ => {
            let Some(path) = spec.strip_prefix("file:") else {
                return Err(Failure::Usage(format!("--uig: unknown method `{spec}`")));
            };
            let g = read_graph(path, false)?;
            if !g.directed_edges().is_empty() {
                return Err(Failure::Input(format!("{path}: a UIG has undirected edges only")));
            }
            let g = g
                .reindexed(src.names())
                .map_err(|_| Failure::Input(format!("{path}: UIG vertices differ from the variables")))?;
            Ok(UigMethod::Given(g.skeleton()))
        }
    }
}

fn report(learned: &Learned, algo: Algorithm, src: &CiSource, elapsed_ms: Option<u128>) -> serde_json::Map<String, Value> {
    let g = &learned.graph;
    let mut sepsets: Vec<(String, String, Vec<String>)> = learned
        .skeleton
        .sepsets
        .iter()
        .map(|(&(u, v), s)| {
            let (a, b) = (g.name(u).to_string(), g.name(v).to_string());
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            (a, b, set_names(g, s))
        })
        .collect();
    sepsets.sort();
    let mut m = fields!(
        "algo" => algo,
        "variables" => g.names(),
        "query_count" => src.query_count(),
        "levels" => learned.skeleton.levels,
        "sepsets" => sepsets.iter().map(|(a, b, s)| json!({"u": a, "v": b, "set": s})).collect::<Vec<_>>(),
        "graph" => g.to_text(),
    );
    if let Some(labels) = &learned.labels {
        let ambiguous: Vec<[&str; 3]> = labels
            .iter()
            .filter(|l| l.kind == ampcg::learn::TripleKind::Ambiguous)
            .map(|l| [g.name(l.x), g.name(l.middle), g.name(l.z)])
            .collect();
        m.insert("ambiguous_triples".into(), json!(ambiguous));
    }
    if let Some(ms) = elapsed_ms {
        m.insert("elapsed_ms".into(), json!(ms as u64));
    }
    m
}

pub fn run(args: &LearnArgs) -> Outcome {
    let algo: Algorithm = args.algo.parse()?;
    if args.emit_tree.is_some() && algo != Algorithm::Lcd {
        return Err(Failure::Usage("--emit-tree needs --algo lcd".into()));
    }
    if args.uig.is_some() && algo != Algorithm::Lcd {
        return Err(Failure::Usage("--uig needs --algo lcd".into()));
    }
    let (src, truth) = source(args)?;
    let mut cfg = LearnConfig::new(Variant::Stable);
    if let Some(order) = &args.order {
        cfg = cfg.with_order(&name_list(order));
    }
    cfg.max_sepset_size = args.max_sepset;

    let start = Instant::now();
    let learned = match algo {
        Algorithm::Lcd => {
            let uig = match &args.uig {
                Some(spec) => uig_method(spec, &src, truth.as_ref())?,
                None => UigMethod::default_for(&src)?,
            };
            let out = lcd_amp(&src, &cfg, &uig)?;
            if let Some(path) = &args.emit_tree {
                let mut text = serde_json::to_vec(&out.tree.to_json(src.names())).expect("serializable");
                text.push(b'\n');
                write_out(Some(path), &text)?;
            }
            out.learned
        }
        Algorithm::Pc(_) => algo.run(&src, &cfg, None)?,
    };
    let elapsed = args.timings.then(|| start.elapsed().as_millis());

    let doc = json_doc(report(&learned, algo, &src, elapsed));
    if let Some(path) = &args.report {
        write_out(Some(path), &doc)?;
    }
    if args.json {
        if let Some(path) = &args.out {
            write_out(Some(path), learned.graph.to_text().as_bytes())?;
        }
        write_out(None, &doc)
    } else {
        write_out(args.out.as_deref(), learned.graph.to_text().as_bytes())
    }
}
