//! Line-oriented text format.
//!
//! ```text
//! # comment
//! node a
//! a -> b
//! b -- c
//! ```
//!
//! Vertex order is order of first appearance.

use std::str::FromStr;

use super::{ChainGraph, Link};
use crate::error::{Error, Result};

enum Line<'a> {
    Node(&'a str),
    Directed(&'a str, &'a str),
    Undirected(&'a str, &'a str),
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with('#')
        && s.chars().all(|c| !c.is_whitespace() && c != ',')
        && s != "->"
        && s != "--"
}

fn parse_line(line: &str) -> std::result::Result<Option<Line<'_>>, String> {
    let content = line.split('#').next().unwrap_or("").trim();
    if content.is_empty() {
        return Ok(None);
    }
    let tokens: Vec<&str> = content.split_whitespace().collect();
    let check = |s: &'_ str| {
        if valid_name(s) {
            Ok(())
        } else {
            Err(format!("invalid vertex name `{s}`"))
        }
    };
    match tokens.as_slice() {
        ["node", name] => {
            check(name)?;
            Ok(Some(Line::Node(name)))
        }
        [a, "->", b] => {
            check(a)?;
            check(b)?;
            Ok(Some(Line::Directed(a, b)))
        }
        [a, "--", b] => {
            check(a)?;
            check(b)?;
            Ok(Some(Line::Undirected(a, b)))
        }
        _ => Err(format!("cannot parse `{content}`")),
    }
}

impl FromStr for ChainGraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let parsed = parse_line(raw).map_err(|message| Error::Parse {
                line: i + 1,
                message,
            })?;
            let Some(parsed) = parsed else { continue };
            let mentioned: &[&str] = match &parsed {
                Line::Node(a) => &[*a][..],
                Line::Directed(a, b) | Line::Undirected(a, b) => &[*a, *b][..],
            };
            for name in mentioned {
                if seen.insert(name.to_string()) {
                    names.push(name.to_string());
                }
            }
            lines.push((i + 1, parsed));
        }
        let mut g = ChainGraph::new(names)?;
        for (line, parsed) in lines {
            let result = match parsed {
                Line::Node(_) => Ok(()),
                Line::Directed(a, b) => g.add_directed(g.vertex(a)?, g.vertex(b)?),
                Line::Undirected(a, b) => g.add_undirected(g.vertex(a)?, g.vertex(b)?),
            };
            result.map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        Ok(g)
    }
}

impl ChainGraph {
    /// Serializes to the text format: one `node` line per vertex in order,
    /// then the edges sorted by name.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            out.push_str("node ");
            out.push_str(name);
            out.push('\n');
        }
        let mut edges: Vec<String> = Vec::new();
        for a in 0..self.n() {
            for b in 0..self.n() {
                let (x, y) = (self.name(a), self.name(b));
                match self.link(a, b) {
                    Link::Out => edges.push(format!("{x} -> {y}")),
                    Link::Undirected if x < y => edges.push(format!("{x} -- {y}")),
                    _ => {}
                }
            }
        }
        edges.sort();
        for e in edges {
            out.push_str(&e);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_orders_by_first_appearance() {
        let g: ChainGraph = "# header\nb -> a\n\nnode c # trailing\na -- c\n".parse().unwrap();
        assert_eq!(g.names(), ["b", "a", "c"]);
        assert_eq!(g.link(0, 1), Link::Out);
        assert_eq!(g.link(2, 1), Link::Undirected);
    }

    #[test]
    fn duplicates_and_conflicts() {
        let g: ChainGraph = "a -> b\na -> b\na -- c\nc -- a".parse().unwrap();
        assert_eq!(g.edge_count(), 2);
        for bad in ["a -> b\nb -> a", "a -> b\na -- b", "a -> a", "a => b", "node", "a -> b c"] {
            let err = bad.parse::<ChainGraph>().unwrap_err();
            assert!(matches!(err, Error::Parse { .. }), "{bad}: {err}");
        }
        match "x -- y\ny -> x".parse::<ChainGraph>() {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let text = "node z\nnode a\nnode m\na -> m\nm -- z\n";
        let g: ChainGraph = text.parse().unwrap();
        assert_eq!(g.to_text(), text);
        let back: ChainGraph = g.to_text().parse().unwrap();
        assert_eq!(back, g);
    }
}
