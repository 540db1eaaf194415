//! The SGF (stochastic graph format) text format.
//!
//! ```text
//! # comment
//! graph <name>
//! rho <letter> <rat>
//! vertex <id>
//! edge <id> <src> <dst> <rat> [label=<letter>]
//! color <edge-id> <letter>
//! ```
//!
//! `<rat>` is `int`, `int/int`, or a terminating decimal. Extension files
//! additionally carry `cocycle <letter> <vertex> <perm>` lines.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{parse_rational, EdgeSpec, Rational, Rho, StochasticGraph};
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone)]
pub struct SgfDocument {
    pub graph: StochasticGraph,
    pub rho: Option<Rho>,
    /// Letter index per edge, when the file carries a full edge labeling.
    pub labels: Option<Vec<usize>>,
    pub cocycles: Vec<CocycleLine>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleLine {
    pub letter: String,
    pub vertex: String,
    pub perm: Permutation,
    pub line: usize,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses an SGF graph file; `cocycle` lines are rejected.
pub fn parse_sgf(text: &str) -> Result<SgfDocument> {
    parse_document(text, false)
}

pub(crate) fn parse_document(text: &str, allow_cocycle: bool) -> Result<SgfDocument> {
    let mut name = None;
    let mut rho_entries: Vec<(String, Rational)> = Vec::new();
    let mut rho_line = 0;
    let mut vertices: Vec<String> = Vec::new();
    let mut vertex_lines: Vec<usize> = Vec::new();
    let mut vertex_index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<EdgeSpec> = Vec::new();
    let mut edge_index: HashMap<String, usize> = HashMap::new();
    let mut raw_labels: Vec<Option<(String, usize)>> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();
    let mut cocycles = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let rat = |tok: &str| {
            parse_rational(tok).ok_or_else(|| parse_err(line, format!("`{tok}` is not a rational literal")))
        };
        match tokens[0] {
            "graph" => {
                if tokens.len() != 2 {
                    return Err(parse_err(line, "expected `graph <name>`"));
                }
                if name.is_some() {
                    return Err(parse_err(line, "duplicate graph header"));
                }
                name = Some(tokens[1].to_string());
            }
            "rho" => {
                if tokens.len() != 3 {
                    return Err(parse_err(line, "expected `rho <letter> <rat>`"));
                }
                if rho_entries.iter().any(|(l, _)| l == tokens[1]) {
                    return Err(parse_err(line, format!("duplicate letter `{}`", tokens[1])));
                }
                rho_entries.push((tokens[1].to_string(), rat(tokens[2])?));
                rho_line = line;
            }
            "vertex" => {
                if tokens.len() != 2 {
                    return Err(parse_err(line, "expected `vertex <id>`"));
                }
                let id = tokens[1].to_string();
                if vertex_index.insert(id.clone(), vertices.len()).is_some() {
                    return Err(parse_err(line, format!("duplicate vertex `{id}`")));
                }
                vertices.push(id);
                vertex_lines.push(line);
            }
            "edge" => {
                if tokens.len() != 5 && tokens.len() != 6 {
                    return Err(parse_err(line, "expected `edge <id> <src> <dst> <rat> [label=<letter>]`"));
                }
                let id = tokens[1].to_string();
                let endpoint = |tok: &str| {
                    vertex_index
                        .get(tok)
                        .copied()
                        .ok_or_else(|| parse_err(line, format!("unknown vertex `{tok}`")))
                };
                let src = endpoint(tokens[2])?;
                let dst = endpoint(tokens[3])?;
                let weight = rat(tokens[4])?;
                if weight <= Rational::from_integer(0.into()) {
                    return Err(parse_err(line, format!("edge `{id}` has non-positive weight")));
                }
                let label = match tokens.get(5) {
                    None => None,
                    Some(attr) => match attr.strip_prefix("label=") {
                        Some(letter) if !letter.is_empty() => Some((letter.to_string(), line)),
                        _ => return Err(parse_err(line, format!("unknown edge attribute `{attr}`"))),
                    },
                };
                if edge_index.insert(id.clone(), edges.len()).is_some() {
                    return Err(parse_err(line, format!("duplicate edge `{id}`")));
                }
                edges.push(EdgeSpec::new(id, src, dst, weight));
                raw_labels.push(label);
                edge_lines.push(line);
            }
            "color" => {
                if tokens.len() != 3 {
                    return Err(parse_err(line, "expected `color <edge-id> <letter>`"));
                }
                let e = *edge_index
                    .get(tokens[1])
                    .ok_or_else(|| parse_err(line, format!("unknown edge `{}`", tokens[1])))?;
                if raw_labels[e].is_some() {
                    return Err(parse_err(line, format!("edge `{}` labeled twice", tokens[1])));
                }
                raw_labels[e] = Some((tokens[2].to_string(), line));
            }
            "cocycle" if allow_cocycle => {
                if tokens.len() < 4 {
                    return Err(parse_err(line, "expected `cocycle <letter> <vertex> <perm>`"));
                }
                let perm_text = tokens[3..].join(" ");
                let perm = perm_text.parse::<Permutation>().map_err(|e| parse_err(line, e.to_string()))?;
                cocycles.push(CocycleLine {
                    letter: tokens[1].to_string(),
                    vertex: tokens[2].to_string(),
                    perm,
                    line,
                });
            }
            other => return Err(parse_err(line, format!("unknown key `{other}`"))),
        }
    }

    let rho = if rho_entries.is_empty() {
        None
    } else {
        Some(Rho::new(rho_entries).map_err(|e| parse_err(rho_line, e.to_string()))?)
    };

    // Row-stochasticity and in/out degree are reported at the vertex declaration.
    let n = vertices.len();
    if n == 0 {
        return Err(parse_err(text.lines().count().max(1), "no vertices declared"));
    }
    let mut out_sum = vec![Rational::from_integer(0.into()); n];
    let mut has_in = vec![false; n];
    for e in &edges {
        out_sum[e.src] += &e.weight;
        has_in[e.dst] = true;
    }
    for u in 0..n {
        if out_sum[u] != Rational::from_integer(1.into()) {
            return Err(parse_err(
                vertex_lines[u],
                Error::RowSum {
                    vertex: vertices[u].clone(),
                    sum: out_sum[u].to_string(),
                }
                .to_string(),
            ));
        }
        if !has_in[u] {
            return Err(parse_err(
                vertex_lines[u],
                format!("vertex `{}` has no incoming edge", vertices[u]),
            ));
        }
    }

    let labels = if raw_labels.iter().all(Option::is_none) {
        None
    } else {
        let rho = rho
            .as_ref()
            .ok_or_else(|| parse_err(raw_labels.iter().flatten().next().unwrap().1, "labels require `rho` lines"))?;
        let mut labels = Vec::with_capacity(edges.len());
        for (e, label) in raw_labels.iter().enumerate() {
            let (letter, line) = label
                .as_ref()
                .ok_or_else(|| parse_err(edge_lines[e], format!("edge `{}` is unlabeled in a labeled file", edges[e].id)))?;
            let i = rho
                .letter_index(letter)
                .ok_or_else(|| parse_err(*line, format!("unknown letter `{letter}`")))?;
            labels.push(i);
        }
        Some(labels)
    };

    let graph = StochasticGraph::new(name, vertices, edges)?;
    Ok(SgfDocument {
        graph,
        rho,
        labels,
        cocycles,
    })
}

/// Writes `graph`, `rho`, `vertex`, then `edge` lines; labels become `label=` attributes.
pub fn emit_sgf(g: &StochasticGraph, rho: Option<&Rho>, labels: Option<&[usize]>) -> String {
    let mut out = String::new();
    if let Some(name) = g.name() {
        let _ = writeln!(out, "graph {name}");
    }
    if let Some(rho) = rho {
        for (l, w) in rho.letters().iter().zip(rho.weights()) {
            let _ = writeln!(out, "rho {l} {w}");
        }
    }
    for v in g.vertices() {
        let _ = writeln!(out, "vertex {v}");
    }
    for (k, e) in g.edges().iter().enumerate() {
        let _ = write!(
            out,
            "edge {} {} {} {}",
            e.id,
            g.vertex_name(e.src),
            g.vertex_name(e.dst),
            e.weight
        );
        if let (Some(rho), Some(labels)) = (rho, labels) {
            let _ = write!(out, " label={}", rho.letter(labels[k]));
        }
        out.push('\n');
    }
    out
}

/// `color <edge-id> <letter>` lines for a coloring, to append to an unlabeled SGF file.
pub fn emit_colors(g: &StochasticGraph, rho: &Rho, labels: &[usize]) -> String {
    let mut out = String::new();
    for (e, &i) in g.edges().iter().zip(labels) {
        let _ = writeln!(out, "color {} {}", e.id, rho.letter(i));
    }
    out
}
