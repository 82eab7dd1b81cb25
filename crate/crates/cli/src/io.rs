use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use ampcg::{ChainGraph, Error, VertexSet};
use serde_json::Value;

/// A failed invocation, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or flag values (exit 1).
    Usage(String),
    /// Unreadable or malformed input (exit 2).
    Input(String),
    /// A violated algorithmic precondition (exit 3).
    Precondition(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Precondition(m) => m,
        }
    }

    /// Reclassifies anything but a precondition failure as bad input.
    pub fn input(e: Error) -> Failure {
        if e.is_precondition() && !matches!(e, Error::NotAmpChainGraph) {
            Failure::Precondition(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_precondition() {
            Failure::Precondition(e.to_string())
        } else if matches!(e, Error::Config(_)) {
            Failure::Usage(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

fn with_path(path: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{path}: {e}"))
}

/// Reads a file, or stdin for `-`.
pub fn read_text(path: &str) -> Outcome<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| with_path(path, e))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| with_path(path, e))
}

/// Parses a graph file. With `amp`, graphs with a partially directed cycle
/// are rejected.
pub fn read_graph(path: &str, amp: bool) -> Outcome<ChainGraph> {
    let g: ChainGraph = read_text(path)?.parse().map_err(|e| with_path(path, e))?;
    if amp && !g.is_amp_cg() {
        return Err(with_path(path, Error::NotAmpChainGraph));
    }
    Ok(g)
}

/// Writes to a file, or stdout for `None` and `-`.
pub fn write_out(path: Option<&Path>, bytes: &[u8]) -> Outcome {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, bytes).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| Failure::Input(e.to_string()))
        }
    }
}

/// Pretty JSON with a `"schema": 1` tag, keys sorted, newline-terminated.
pub fn json_doc(mut fields: serde_json::Map<String, Value>) -> Vec<u8> {
    fields.insert("schema".into(), 1.into());
    let mut out = serde_json::to_vec_pretty(&Value::Object(fields)).expect("serializable");
    out.push(b'\n');
    out
}

/// Builds a JSON object from `key => value` pairs.
#[macro_export]
macro_rules! fields {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = serde_json::Map::new();
        $(m.insert($k.to_string(), serde_json::json!($v));)*
        m
    }};
}

/// Vertex names of `set`, sorted.
pub fn set_names(g: &ChainGraph, set: &VertexSet) -> Vec<String> {
    let mut names: Vec<String> = set.iter().map(|&v| g.name(v).to_string()).collect();
    names.sort();
    names
}

/// Comma-separated sorted names; `{}` for the empty set.
pub fn fmt_set(g: &ChainGraph, set: &VertexSet) -> String {
    if set.is_empty() {
        "{}".into()
    } else {
        set_names(g, set).join(",")
    }
}

/// Parses a comma-separated list of names; empty and `{}` give no names.
pub fn name_list(text: &str) -> Vec<String> {
    let t = text.trim();
    if t.is_empty() || t == "{}" {
        return Vec::new();
    }
    t.split(',').map(|s| s.trim().to_string()).collect()
}

/// Vertices named in a flag value.
pub fn vertex_set(g: &ChainGraph, flag: &str, text: &str) -> Outcome<VertexSet> {
    name_list(text).iter().map(|n| vertex(g, flag, n)).collect()
}

pub fn vertex(g: &ChainGraph, flag: &str, name: &str) -> Outcome<usize> {
    g.index_of(name).ok_or_else(|| Failure::Usage(format!("--{flag}: unknown vertex `{name}`")))
}
