use ampcg::separation::{
    enumerate_minimal_separators, find_minimal_separator, is_minimal_separator, minimal_separator_sets,
    restricted_minimal_separator, restricted_separator, Restricted,
};
use ampcg::{p_separated_aug, ChainGraph, SeparationQuery, VertexSet};
use clap::{Args, Subcommand};

use crate::fields;
use crate::io::{fmt_set, json_doc, read_graph, set_names, vertex, vertex_set, write_out, Outcome};

#[derive(Subcommand)]
pub enum MinsepCmd {
    /// Whether Z is a minimal separator of u and v
    Test {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value = "")]
        z: String,
    },
    /// A minimal separator of u and v
    Find {
        #[command(flatten)]
        pair: Pair,
    },
    /// A separator of u and v inside S
    Restricted {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value = "")]
        s: String,
    },
    /// A minimal separator of u and v inside S
    RestrictedMin {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value = "")]
        s: String,
    },
    /// A minimal separator of the vertex sets X and Y
    Sets {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// All minimal separators of u and v, one per line
    Enumerate {
        #[command(flatten)]
        pair: Pair,
    },
    /// Whether Z p-separates the vertex sets X and Y
    Separated {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "")]
        z: String,
    },
}

#[derive(Args)]
pub struct Common {
    /// Graph file (`-` for stdin)
    #[arg(long)]
    graph: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
pub struct Pair {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    u: String,
    #[arg(long)]
    v: String,
}

impl Pair {
    fn load(&self) -> Outcome<(ChainGraph, usize, usize)> {
        let g = read_graph(&self.common.graph, true)?;
        let (u, v) = (vertex(&g, "u", &self.u)?, vertex(&g, "v", &self.v)?);
        Ok((g, u, v))
    }
}

fn restricted_output(g: &ChainGraph, r: Restricted, json: bool) -> Vec<u8> {
    match (r, json) {
        (Restricted::Separator(z), false) => format!("{}\n", fmt_set(g, &z)).into_bytes(),
        (Restricted::NotSeparable, false) => b"not separable\n".to_vec(),
        (Restricted::Separator(z), true) => json_doc(fields!("separable" => true, "separator" => set_names(g, &z))),
        (Restricted::NotSeparable, true) => {
            json_doc(fields!("separable" => false, "separator" => serde_json::Value::Null))
        }
    }
}

fn set_output(g: &ChainGraph, z: &VertexSet, json: bool) -> Vec<u8> {
    if json {
        json_doc(fields!("separator" => set_names(g, z)))
    } else {
        format!("{}\n", fmt_set(g, z)).into_bytes()
    }
}

pub fn run(cmd: &MinsepCmd) -> Outcome {
    let out = match cmd {
        MinsepCmd::Test { pair, z } => {
            let (g, u, v) = pair.load()?;
            let z = vertex_set(&g, "z", z)?;
            let minimal = is_minimal_separator(&g, u, v, &z)?;
            if pair.common.json {
                json_doc(fields!("minimal" => minimal))
            } else {
                format!("minimal: {minimal}\n").into_bytes()
            }
        }
        MinsepCmd::Find { pair } => {
            let (g, u, v) = pair.load()?;
            set_output(&g, &find_minimal_separator(&g, u, v)?, pair.common.json)
        }
        MinsepCmd::Restricted { pair, s } => {
            let (g, u, v) = pair.load()?;
            let s = vertex_set(&g, "s", s)?;
            restricted_output(&g, restricted_separator(&g, u, v, &s)?, pair.common.json)
        }
        MinsepCmd::RestrictedMin { pair, s } => {
            let (g, u, v) = pair.load()?;
            let s = vertex_set(&g, "s", s)?;
            restricted_output(&g, restricted_minimal_separator(&g, u, v, &s)?, pair.common.json)
        }
        MinsepCmd::Sets { common, x, y } => {
            let g = read_graph(&common.graph, true)?;
            let (x, y) = (vertex_set(&g, "x", x)?, vertex_set(&g, "y", y)?);
            set_output(&g, &minimal_separator_sets(&g, &x, &y)?, common.json)
        }
        MinsepCmd::Enumerate { pair } => {
            let (g, u, v) = pair.load()?;
            let mut all: Vec<Vec<String>> =
                enumerate_minimal_separators(&g, u, v)?.iter().map(|z| set_names(&g, z)).collect();
            all.sort();
            if pair.common.json {
                json_doc(fields!("separators" => all))
            } else {
                let mut text = String::new();
                for z in &all {
                    text.push_str(if z.is_empty() { "{}" } else { "" });
                    text.push_str(&z.join(","));
                    text.push('\n');
                }
                text.into_bytes()
            }
        }
        MinsepCmd::Separated { common, x, y, z } => {
            let g = read_graph(&common.graph, true)?;
            let q = SeparationQuery::new(vertex_set(&g, "x", x)?, vertex_set(&g, "y", y)?, vertex_set(&g, "z", z)?);
            let separated = p_separated_aug(&g, &q)?;
            if common.json {
                json_doc(fields!("separated" => separated))
            } else {
                format!("separated: {separated}\n").into_bytes()
            }
        }
    };
    write_out(None, &out)
}
