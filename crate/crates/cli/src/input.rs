use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rhoshift::extension::{parse_gsp, GspExtension};
use rhoshift::graph::sgf::parse_sgf;
use rhoshift::{Rho, StochasticGraph};

/// A graph file or an extension file (one carrying `cocycle` lines).
pub enum Input {
    Graph {
        graph: StochasticGraph,
        rho: Option<Rho>,
        labels: Option<Vec<usize>>,
    },
    Extension(GspExtension),
}

impl Input {
    pub fn load(path: &Path, budget: usize) -> Result<Input> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Input::parse(&text, budget)
    }

    pub fn parse(text: &str, budget: usize) -> Result<Input> {
        let has_cocycle = text
            .lines()
            .any(|l| l.split_whitespace().next() == Some("cocycle"));
        if has_cocycle {
            return Ok(Input::Extension(parse_gsp(text, budget)?));
        }
        let doc = parse_sgf(text)?;
        Ok(Input::Graph {
            graph: doc.graph,
            rho: doc.rho,
            labels: doc.labels,
        })
    }

    /// The graph whose shift is meant: the total graph for an extension.
    pub fn graph(&self) -> StochasticGraph {
        match self {
            Input::Graph { graph, .. } => graph.clone(),
            Input::Extension(e) => e.total_graph().0,
        }
    }

    pub fn declared_rho(&self) -> Option<Rho> {
        match self {
            Input::Graph { rho, .. } => rho.clone(),
            Input::Extension(e) => Some(e.rho().clone()),
        }
    }

    /// Declared rho, or one read off the first vertex.
    pub fn rho(&self) -> Result<Rho> {
        match self.declared_rho() {
            Some(r) => Ok(r),
            None => Ok(Rho::infer(&self.graph())?),
        }
    }

    pub fn labels(&self) -> Option<Vec<usize>> {
        match self {
            Input::Graph { labels, .. } => labels.clone(),
            Input::Extension(e) => Some(e.total_graph().1),
        }
    }
}

/// A single rho for two inputs; declared ones must agree.
pub fn common_rho(a: &Input, b: &Input) -> Result<Rho> {
    match (a.declared_rho(), b.declared_rho()) {
        (Some(x), Some(y)) if x != y => bail!(rhoshift::Error::InvalidRho("the two inputs declare different rho".into())),
        (Some(x), _) | (None, Some(x)) => Ok(x),
        (None, None) => a.rho(),
    }
}
