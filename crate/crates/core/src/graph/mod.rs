//! Finite stochastic graphs with exact rational weights.
//!
//! Paths follow the backward convention: in `g1 g2 ... gn` the edge `gn`
//! is traversed first and `s(g_k) = t(g_{k+1})`.

mod analysis;
pub mod sgf;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use analysis::{ReturnWord, StringedGraph};

pub type Rational = num_rational::BigRational;

/// Parses `int`, `int/int`, or a terminating decimal literal such as `0.25`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    use num_bigint::BigInt;

    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let int = |s: &str| -> Option<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    };
    if let Some((num, den)) = text.split_once('/') {
        let num = int(num)?;
        let den = int(den)?;
        if den.is_zero() || den.is_negative() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.strip_prefix('-').unwrap_or(whole);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut digits = String::with_capacity(whole_digits.len() + frac.len() + 1);
        if negative {
            digits.push('-');
        }
        digits.push_str(if whole_digits.is_empty() { "0" } else { whole_digits });
        digits.push_str(frac);
        let num: BigInt = digits.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        return Some(Rational::new(num, den));
    }
    int(text).map(Rational::from_integer)
}

/// The Bernoulli state space `(I, rho)`: an ordered alphabet with positive weights summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rho {
    letters: Vec<String>,
    weights: Vec<Rational>,
}

impl Rho {
    pub fn new<S: Into<String>>(entries: Vec<(S, Rational)>) -> Result<Self> {
        let mut letters = Vec::with_capacity(entries.len());
        let mut weights = Vec::with_capacity(entries.len());
        for (letter, weight) in entries {
            let letter = letter.into();
            if letters.contains(&letter) {
                return Err(Error::InvalidRho(format!("duplicate letter `{letter}`")));
            }
            if !weight.is_positive() {
                return Err(Error::InvalidRho(format!(
                    "letter `{letter}` has non-positive weight {weight}"
                )));
            }
            letters.push(letter);
            weights.push(weight);
        }
        if letters.is_empty() {
            return Err(Error::InvalidRho("empty alphabet".into()));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidRho(format!("weights sum to {total}, expected 1")));
        }
        Ok(Rho { letters, weights })
    }

    /// Letters `0, 1, ..., k-1` with the given weights.
    pub fn from_weights(weights: Vec<Rational>) -> Result<Self> {
        Rho::new(
            weights
                .into_iter()
                .enumerate()
                .map(|(i, w)| (i.to_string(), w))
                .collect(),
        )
    }

    /// Reads `rho` off the out-weights of the first vertex, letters named
    /// `0..k` in ascending weight order.
    pub fn infer(g: &StochasticGraph) -> Result<Self> {
        let mut weights: Vec<Rational> = g
            .out_edges(0)
            .iter()
            .map(|&e| g.edge(e).weight.clone())
            .collect();
        weights.sort();
        Rho::from_weights(weights)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> &str {
        &self.letters[i]
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn letter_index(&self, letter: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == letter)
    }

    /// Groups letters into classes of equal weight, classes in order of first appearance.
    pub fn weight_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.len() {
            match classes
                .iter_mut()
                .find(|c| self.weights[c[0]] == self.weights[i])
            {
                Some(c) => c.push(i),
                None => classes.push(vec![i]),
            }
        }
        classes
    }

    /// True when no two letters carry the same weight (no congruent edges in `(I, rho)`).
    pub fn is_absolutely_nonhomogeneous(&self) -> bool {
        self.weight_classes().iter().all(|c| c.len() == 1)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.weight_classes().len() == 1
    }

    /// The one-vertex Bernoulli graph; edge `i` is the loop for letter `i`.
    pub fn bernoulli_graph(&self) -> StochasticGraph {
        let edges = self
            .letters
            .iter()
            .zip(&self.weights)
            .map(|(l, w)| EdgeSpec::new(l.clone(), 0, 0, w.clone()))
            .collect();
        StochasticGraph::new(Some("bernoulli".into()), vec!["o".into()], edges)
            .expect("rho defines a valid Bernoulli graph")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub weight: Rational,
}

/// Edge description used when building a graph; endpoints are vertex indices.
#[derive(Debug, Clone)]
pub struct EdgeSpec {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub weight: Rational,
}

impl EdgeSpec {
    pub fn new(id: impl Into<String>, src: usize, dst: usize, weight: Rational) -> Self {
        EdgeSpec {
            id: id.into(),
            src,
            dst,
            weight,
        }
    }
}

/// A finite weighted directed multigraph whose out-weights sum to 1 at every vertex.
///
/// Vertex and edge order is the construction (file) order; every algorithm
/// iterates in that order.
#[derive(Debug, Clone)]
pub struct StochasticGraph {
    name: Option<String>,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl PartialEq for StochasticGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for StochasticGraph {}

impl StochasticGraph {
    pub fn new(name: Option<String>, vertices: Vec<String>, edges: Vec<EdgeSpec>) -> Result<Self> {
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (k, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), k).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{v}`")));
            }
        }
        if vertices.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let n = vertices.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut stored = Vec::with_capacity(edges.len());
        for (k, e) in edges.into_iter().enumerate() {
            if e.src >= n || e.dst >= n {
                return Err(Error::InvalidGraph(format!("edge `{}` has an endpoint out of range", e.id)));
            }
            if !e.weight.is_positive() {
                return Err(Error::InvalidGraph(format!(
                    "edge `{}` has non-positive weight {}",
                    e.id, e.weight
                )));
            }
            if edge_index.insert(e.id.clone(), k).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge `{}`", e.id)));
            }
            out_edges[e.src].push(k);
            in_edges[e.dst].push(k);
            stored.push(Edge {
                id: e.id,
                src: e.src,
                dst: e.dst,
                weight: e.weight,
            });
        }
        for u in 0..n {
            if out_edges[u].is_empty() {
                return Err(Error::InvalidGraph(format!("vertex `{}` has no outgoing edge", vertices[u])));
            }
            if in_edges[u].is_empty() {
                return Err(Error::InvalidGraph(format!("vertex `{}` has no incoming edge", vertices[u])));
            }
            let sum: Rational = out_edges[u].iter().map(|&e| &stored[e].weight).sum();
            if !sum.is_one() {
                return Err(Error::RowSum {
                    vertex: vertices[u].clone(),
                    sum: sum.to_string(),
                });
            }
        }
        Ok(StochasticGraph {
            name,
            vertices,
            edges: stored,
            out_edges,
            in_edges,
            vertex_index,
            edge_index,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, u: usize) -> &str {
        &self.vertices[u]
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_id(&self, name: &str) -> Option<usize> {
        self.edge_index.get(name).copied()
    }

    /// `G_u`: edges leaving `u`, in file order.
    pub fn out_edges(&self, u: usize) -> &[usize] {
        &self.out_edges[u]
    }

    /// `_vG`: edges entering `v`, in file order.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// Renames and reorders vertices and edges.
    ///
    /// `vertex_order[k]` is the old index of the vertex placed at position
    /// `k`; likewise for `edge_order`. New names are `v<k>` and `e<k>`.
    pub fn relabeled(&self, vertex_order: &[usize], edge_order: &[usize]) -> StochasticGraph {
        assert_eq!(vertex_order.len(), self.vertex_count());
        assert_eq!(edge_order.len(), self.edge_count());
        let mut new_of_old = vec![0; self.vertex_count()];
        for (k, &old) in vertex_order.iter().enumerate() {
            new_of_old[old] = k;
        }
        let vertices = (0..self.vertex_count()).map(|k| format!("v{k}")).collect();
        let edges = edge_order
            .iter()
            .enumerate()
            .map(|(k, &old)| {
                let e = &self.edges[old];
                EdgeSpec::new(format!("e{k}"), new_of_old[e.src], new_of_old[e.dst], e.weight.clone())
            })
            .collect();
        StochasticGraph::new(self.name.clone(), vertices, edges).expect("relabeling preserves validity")
    }
}

/// A nonempty backward path `g1 g2 ... gn` with `s(g_k) = t(g_{k+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    edges: Vec<usize>,
}

impl Path {
    pub fn new(g: &StochasticGraph, edges: Vec<usize>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidPath("paths are nonempty".into()));
        }
        if let Some(&e) = edges.iter().find(|&&e| e >= g.edge_count()) {
            return Err(Error::InvalidPath(format!("edge index {e} out of range")));
        }
        for k in 0..edges.len() - 1 {
            if g.edge(edges[k]).src != g.edge(edges[k + 1]).dst {
                return Err(Error::InvalidPath(format!(
                    "s({}) != t({})",
                    g.edge(edges[k]).id,
                    g.edge(edges[k + 1]).id
                )));
            }
        }
        Ok(Path { edges })
    }

    /// Builds the backward path for edges listed in traversal (time) order.
    pub fn from_traversal(g: &StochasticGraph, mut traversal: Vec<usize>) -> Result<Self> {
        traversal.reverse();
        Path::new(g, traversal)
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Edges in traversal order (`gn` first).
    pub fn traversal(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().rev().copied()
    }

    /// `s(gn)`, the vertex where the path starts.
    pub fn start(&self, g: &StochasticGraph) -> usize {
        g.edge(*self.edges.last().expect("nonempty")).src
    }

    /// `t(g1)`, the vertex where the path ends.
    pub fn end(&self, g: &StochasticGraph) -> usize {
        g.edge(self.edges[0]).dst
    }

    pub fn weight(&self, g: &StochasticGraph) -> Rational {
        self.edges.iter().map(|&e| &g.edge(e).weight).product()
    }

    pub fn display<'a>(&'a self, g: &'a StochasticGraph) -> impl fmt::Display + 'a {
        PathDisplay { path: self, g }
    }
}

struct PathDisplay<'a> {
    path: &'a Path,
    g: &'a StochasticGraph,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &e) in self.path.edges.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.g.edge(e).id)?;
        }
        Ok(())
    }
}
