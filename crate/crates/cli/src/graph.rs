use ampcg::ChainGraph;
use clap::Subcommand;

use crate::fields;
use crate::io::{json_doc, read_graph, write_out, Outcome};

#[derive(Subcommand)]
pub enum GraphCmd {
    /// Vertex and edge counts, chain components, triplexes
    Info {
        /// Graph file (`-` for stdin)
        path: String,
        #[arg(long)]
        json: bool,
    },
    /// Rewrites a graph file in canonical form
    Fmt {
        path: String,
    },
}

fn components(g: &ChainGraph) -> Vec<Vec<String>> {
    let mut comps: Vec<Vec<String>> = g
        .chain_components()
        .iter()
        .map(|c| {
            let mut names: Vec<String> = c.iter().map(|&v| g.name(v).to_string()).collect();
            names.sort();
            names
        })
        .collect();
    comps.sort();
    comps
}

pub fn run(cmd: &GraphCmd) -> Outcome {
    let out = match cmd {
        GraphCmd::Info { path, json } => {
            let g = read_graph(path, false)?;
            let amp = g.is_amp_cg();
            let (directed, undirected) = (g.directed_edges().len(), g.undirected_edges().len());
            let comps = components(&g);
            let triplexes: Vec<[String; 3]> = if amp {
                g.triplexes()
                    .iter()
                    .map(|t| [g.name(t.x).into(), g.name(t.middle).into(), g.name(t.z).into()])
                    .collect()
            } else {
                Vec::new()
            };
            if *json {
                json_doc(fields!(
                    "vertices" => g.n(),
                    "directed_edges" => directed,
                    "undirected_edges" => undirected,
                    "components" => comps,
                    "triplexes" => triplexes,
                    "amp_chain_graph" => amp,
                ))
            } else {
                let comps: Vec<String> = comps.iter().map(|c| format!("{{{}}}", c.join(","))).collect();
                format!(
                    "vertices: {}; edges: {} ({directed} directed, {undirected} undirected)\n\
                     components: {}; triplexes: {}\n\
                     amp chain graph: {amp}\n",
                    g.n(),
                    directed + undirected,
                    comps.join(","),
                    triplexes.len(),
                )
                .into_bytes()
            }
        }
        GraphCmd::Fmt { path } => read_graph(path, false)?.to_text().into_bytes(),
    };
    write_out(None, &out)
}
