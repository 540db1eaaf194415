//! Weight-preserving deterministic graph homomorphisms and their letter maps.
//!
//! Words compose right to left: `f_{i1 i2 ... in} = f_{i1} ∘ f_{i2} ∘ ... ∘ f_{in}`,
//! so the rightmost letter acts first.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{Path, Rho, StochasticGraph};
use crate::perm::next_permutation;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self · other`: `other` acts first.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Single-character letters are written back to back, longer ones comma-separated.
    pub fn display<'a>(&'a self, rho: &'a Rho) -> impl fmt::Display + 'a {
        WordDisplay { word: self, rho }
    }

    pub fn parse(text: &str, rho: &Rho) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let lookup = |l: &str| rho.letter_index(l).ok_or_else(|| Error::UnknownLetter(l.to_string()));
        let letters = if text.contains(',') || rho.letters().iter().any(|l| l.chars().count() != 1) {
            text.split(',').map(|l| lookup(l.trim())).collect::<Result<Vec<_>>>()?
        } else {
            text.chars().map(|c| lookup(&c.to_string())).collect::<Result<Vec<_>>>()?
        };
        Ok(Word { letters })
    }
}

struct WordDisplay<'a> {
    word: &'a Word,
    rho: &'a Rho,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let short = self.rho.letters().iter().all(|l| l.chars().count() == 1);
        for (k, &i) in self.word.letters.iter().enumerate() {
            if k > 0 && !short {
                write!(f, ",")?;
            }
            write!(f, "{}", self.rho.letter(i))?;
        }
        Ok(())
    }
}

/// A validated weight-preserving deterministic homomorphism `source → target`.
#[derive(Debug, Clone)]
pub struct GraphHom {
    source: Arc<StochasticGraph>,
    target: Arc<StochasticGraph>,
    edge_map: Vec<usize>,
    vertex_map: Vec<usize>,
}

/// Validates `edge_map` and derives the vertex map.
pub fn check_hom(
    edge_map: Vec<usize>,
    source: Arc<StochasticGraph>,
    target: Arc<StochasticGraph>,
) -> Result<GraphHom> {
    let bad = |m: String| Err(Error::InvalidHom(m));
    if edge_map.len() != source.edge_count() {
        return bad(format!(
            "edge map has {} entries for {} edges",
            edge_map.len(),
            source.edge_count()
        ));
    }
    if let Some(&h) = edge_map.iter().find(|&&h| h >= target.edge_count()) {
        return bad(format!("edge image {h} out of range"));
    }
    let mut vertex_map = vec![usize::MAX; source.vertex_count()];
    for u in 0..source.vertex_count() {
        vertex_map[u] = target.edge(edge_map[source.out_edges(u)[0]]).src;
    }
    for (g, e) in source.edges().iter().enumerate() {
        let h = target.edge(edge_map[g]);
        if h.src != vertex_map[e.src] || h.dst != vertex_map[e.dst] {
            return bad(format!("vertex map inconsistent at edge `{}`", e.id));
        }
        if h.weight != e.weight {
            return bad(format!(
                "weight mismatch: `{}` has {} but its image `{}` has {}",
                e.id, e.weight, h.id, h.weight
            ));
        }
    }
    for u in 0..source.vertex_count() {
        let mut images: Vec<usize> = source.out_edges(u).iter().map(|&g| edge_map[g]).collect();
        images.sort_unstable();
        let mut expected = target.out_edges(vertex_map[u]).to_vec();
        expected.sort_unstable();
        if images != expected {
            return bad(format!(
                "restriction to out-edges of `{}` is not a bijection onto out-edges of `{}`",
                source.vertex_name(u),
                target.vertex_name(vertex_map[u])
            ));
        }
    }
    let mut hit = vec![false; target.vertex_count()];
    for &v in &vertex_map {
        hit[v] = true;
    }
    if let Some(v) = hit.iter().position(|&b| !b) {
        return bad(format!("vertex `{}` is not in the image", target.vertex_name(v)));
    }
    Ok(GraphHom {
        source,
        target,
        edge_map,
        vertex_map,
    })
}

/// The homomorphism onto the Bernoulli graph of `rho` that sends edge `g` to letter `labels[g]`.
pub fn coloring(g: Arc<StochasticGraph>, rho: &Rho, labels: Vec<usize>) -> Result<GraphHom> {
    check_hom(labels, g, Arc::new(rho.bernoulli_graph()))
}

impl GraphHom {
    pub fn identity(g: Arc<StochasticGraph>) -> GraphHom {
        let edge_map = (0..g.edge_count()).collect();
        let vertex_map = (0..g.vertex_count()).collect();
        GraphHom {
            source: g.clone(),
            target: g,
            edge_map,
            vertex_map,
        }
    }

    pub fn source(&self) -> &Arc<StochasticGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<StochasticGraph> {
        &self.target
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GraphHom) -> Result<GraphHom> {
        if *self.target != *next.source {
            return Err(Error::InvalidHom("composition of non-matching homomorphisms".into()));
        }
        let edge_map = self.edge_map.iter().map(|&h| next.edge_map[h]).collect();
        check_hom(edge_map, self.source.clone(), next.target.clone())
    }

    /// Edgewise image of a finite path: the prefix action of the induced factor map.
    pub fn factor_prefix(&self, path: &Path) -> Result<Path> {
        Path::new(&self.target, path.edges().iter().map(|&g| self.edge_map[g]).collect())
    }

    /// True when the vertex map is a bijection (then so is the edge map).
    pub fn is_isomorphism(&self) -> bool {
        self.source.vertex_count() == self.target.vertex_count() && self.source.edge_count() == self.target.edge_count()
    }
}

/// The maps `f_i : U → U`, `f_i u = t(g_{i,u})`, induced by a coloring.
#[derive(Debug, Clone)]
pub struct LetterMaps {
    rho: Rho,
    vertex_names: Vec<String>,
    maps: Vec<Vec<usize>>,
    edge_of: Option<Vec<Vec<usize>>>,
}

// The cached source edges are provenance, not part of the automaton.
impl PartialEq for LetterMaps {
    fn eq(&self, other: &Self) -> bool {
        self.rho == other.rho && self.vertex_names == other.vertex_names && self.maps == other.maps
    }
}

impl Eq for LetterMaps {}

impl LetterMaps {
    /// `maps[i][u] = f_i(u)`.
    pub fn new(rho: Rho, vertex_names: Vec<String>, maps: Vec<Vec<usize>>) -> Result<Self> {
        let n = vertex_names.len();
        if n == 0 {
            return Err(Error::InvalidHom("letter maps over an empty vertex set".into()));
        }
        if maps.len() != rho.len() {
            return Err(Error::InvalidHom(format!("{} maps for {} letters", maps.len(), rho.len())));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.len() != n || m.iter().any(|&v| v >= n) {
                return Err(Error::InvalidHom(format!("map for letter `{}` is not total on U", rho.letter(i))));
            }
        }
        Ok(LetterMaps {
            rho,
            vertex_names,
            maps,
            edge_of: None,
        })
    }

    /// Reads `{f_i}` off a homomorphism onto a one-vertex Bernoulli graph.
    pub fn from_coloring(phi: &GraphHom) -> Result<Self> {
        let target = phi.target();
        if target.vertex_count() != 1 {
            return Err(Error::InvalidHom("target is not a one-vertex Bernoulli graph".into()));
        }
        let rho = Rho::new(
            target
                .edges()
                .iter()
                .map(|e| (e.id.clone(), e.weight.clone()))
                .collect(),
        )?;
        let g = phi.source();
        let n = g.vertex_count();
        let mut maps = vec![vec![0; n]; rho.len()];
        let mut edge_of = vec![vec![0; n]; rho.len()];
        for u in 0..n {
            for &e in g.out_edges(u) {
                let i = phi.edge_map()[e];
                maps[i][u] = g.edge(e).dst;
                edge_of[i][u] = e;
            }
        }
        Ok(LetterMaps {
            rho,
            vertex_names: g.vertices().to_vec(),
            maps,
            edge_of: Some(edge_of),
        })
    }

    pub fn rho(&self) -> &Rho {
        &self.rho
    }

    pub fn letter_count(&self) -> usize {
        self.maps.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_name(&self, u: usize) -> &str {
        &self.vertex_names[u]
    }

    pub fn map(&self, i: usize) -> &[usize] {
        &self.maps[i]
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn apply(&self, i: usize, u: usize) -> usize {
        self.maps[i][u]
    }

    /// The source edge `g_{i,u}` when the maps came from a coloring.
    pub fn edge_of(&self, i: usize, u: usize) -> Option<usize> {
        self.edge_of.as_ref().map(|m| m[i][u])
    }

    /// `f_w(u)`, rightmost letter first.
    pub fn apply_word(&self, w: &Word, u: usize) -> usize {
        w.letters().iter().rev().fold(u, |v, &i| self.maps[i][v])
    }

    /// Like [`apply_word`](Self::apply_word) but validates letters and the vertex.
    pub fn try_apply_word(&self, w: &Word, u: usize) -> Result<usize> {
        if let Some(&i) = w.letters().iter().find(|&&i| i >= self.letter_count()) {
            return Err(Error::UnknownLetter(i.to_string()));
        }
        if u >= self.vertex_count() {
            return Err(Error::UnknownVertex(u.to_string()));
        }
        Ok(self.apply_word(w, u))
    }

    /// The whole map `f_w` as a vector.
    pub fn word_map(&self, w: &Word) -> Vec<usize> {
        (0..self.vertex_count()).map(|u| self.apply_word(w, u)).collect()
    }

    /// `f_i(set)` as a sorted, deduplicated list.
    pub fn image(&self, i: usize, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&u| self.maps[i][u]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The one-vertex-per-`J` graph `H = I × J` with `s(i,j) = j`, `t(i,j) = f_i j`, `p = rho(i)`.
    ///
    /// Edge `(i, j)` has index `i * |J| + j` and id `<letter>:<vertex>`; the
    /// returned labels are the letters.
    pub fn graph(&self) -> Result<(StochasticGraph, Vec<usize>)> {
        use crate::graph::EdgeSpec;
        let n = self.vertex_count();
        let mut edges = Vec::with_capacity(n * self.letter_count());
        let mut labels = Vec::with_capacity(n * self.letter_count());
        for i in 0..self.letter_count() {
            for j in 0..n {
                edges.push(EdgeSpec::new(
                    format!("{}:{}", self.rho.letter(i), self.vertex_names[j]),
                    j,
                    self.maps[i][j],
                    self.rho.weight(i).clone(),
                ));
                labels.push(i);
            }
        }
        Ok((StochasticGraph::new(None, self.vertex_names.clone(), edges)?, labels))
    }
}

/// Limits on coloring enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColoringBudget {
    pub max_colorings: usize,
    pub time_limit: Option<Duration>,
}

impl Default for ColoringBudget {
    fn default() -> Self {
        ColoringBudget {
            max_colorings: 1_000_000,
            time_limit: None,
        }
    }
}

#[derive(Debug, Clone)]
struct Slot {
    edges: Vec<usize>,
    letters: Vec<usize>,
    perm: Vec<usize>,
}

/// Stream of every homomorphism `g → (I, rho)`, as letter-per-edge vectors.
///
/// Per vertex and weight class the edges (file order) are matched to the
/// class's letters by a permutation; permutations run in lexicographic order
/// with the first vertex varying slowest.
#[derive(Debug)]
pub struct Colorings {
    slots: Vec<Slot>,
    edge_count: usize,
    budget: ColoringBudget,
    started: Instant,
    emitted: usize,
    done: bool,
    truncated: bool,
}

pub fn enumerate_colorings(g: &StochasticGraph, rho: &Rho, budget: ColoringBudget) -> Result<Colorings> {
    if !g.is_rho_uniform(rho) {
        return Err(Error::NotRhoUniform);
    }
    let mut slots = Vec::new();
    for u in 0..g.vertex_count() {
        for class in rho.weight_classes() {
            let w = rho.weight(class[0]);
            let edges: Vec<usize> = g.out_edges(u).iter().copied().filter(|&e| &g.edge(e).weight == w).collect();
            debug_assert_eq!(edges.len(), class.len());
            slots.push(Slot {
                perm: (0..class.len()).collect(),
                edges,
                letters: class,
            });
        }
    }
    Ok(Colorings {
        slots,
        edge_count: g.edge_count(),
        budget,
        started: Instant::now(),
        emitted: 0,
        done: false,
        truncated: false,
    })
}

/// `Π_u Π_classes (class size)!`, saturating.
pub fn coloring_count(g: &StochasticGraph, rho: &Rho) -> u128 {
    let per_vertex: u128 = rho
        .weight_classes()
        .iter()
        .map(|c| (1..=c.len() as u128).product::<u128>())
        .fold(1u128, |a, b| a.saturating_mul(b));
    (0..g.vertex_count()).fold(1u128, |a, _| a.saturating_mul(per_vertex))
}

impl Colorings {
    /// True once the budget cut the stream short.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    fn current(&self) -> Vec<usize> {
        let mut labels = vec![0; self.edge_count];
        for slot in &self.slots {
            for (k, &e) in slot.edges.iter().enumerate() {
                labels[e] = slot.letters[slot.perm[k]];
            }
        }
        labels
    }

    fn advance(&mut self) -> bool {
        for slot in self.slots.iter_mut().rev() {
            if next_permutation(&mut slot.perm) {
                return true;
            }
            slot.perm.sort_unstable();
        }
        false
    }
}

impl Iterator for Colorings {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let over_time = self
            .budget
            .time_limit
            .is_some_and(|limit| self.started.elapsed() > limit);
        if self.emitted >= self.budget.max_colorings || over_time {
            self.done = true;
            self.truncated = true;
            return None;
        }
        let labels = self.current();
        self.emitted += 1;
        if !self.advance() {
            self.done = true;
        }
        Some(labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn identity_is_a_valid_hom() {
        let g = Arc::new(fixtures::drunkard_ruin(3, r(1, 3)).graph);
        let id = check_hom((0..g.edge_count()).collect(), g.clone(), g.clone()).unwrap();
        assert!(id.is_isomorphism());
        assert_eq!(id.vertex_map(), &[0, 1, 2]);
    }

    #[test]
    fn drunkard_labeling_is_a_coloring() {
        let fdr = fixtures::drunkard_ruin(3, r(1, 3));
        let phi = coloring(Arc::new(fdr.graph.clone()), &fdr.rho, fdr.labels.clone()).unwrap();
        let lm = LetterMaps::from_coloring(&phi).unwrap();
        // f1 j = min(j+1, n), f0 j = max(j-1, 1)
        assert_eq!(lm.map(1), &[1, 2, 2]);
        assert_eq!(lm.map(0), &[0, 0, 1]);
        assert_eq!(lm.maps(), fdr.base.maps());
    }

    #[test]
    fn swapping_non_congruent_images_fails() {
        let fdr = fixtures::drunkard_ruin(3, r(1, 3));
        let mut labels = fdr.labels.clone();
        labels[0] = 1 - labels[0];
        let err = coloring(Arc::new(fdr.graph), &fdr.rho, labels).unwrap_err();
        assert!(matches!(err, Error::InvalidHom(m) if m.contains("weight mismatch")));
    }

    #[test]
    fn inconsistent_vertex_map_fails() {
        let g = Arc::new(fixtures::two_cycle());
        let loops = Arc::new(fixtures::disjoint_loops());
        // a -> b mapped to a loop at x, b -> a mapped to the loop at y
        let err = check_hom(vec![0, 1], g, loops).unwrap_err();
        assert!(matches!(err, Error::InvalidHom(_)));
    }

    #[test]
    fn bernoulli_letter_maps_are_identities() {
        let rho = Rho::from_weights(vec![r(1, 3), r(2, 3)]).unwrap();
        let b = Arc::new(rho.bernoulli_graph());
        let phi = coloring(b, &rho, vec![0, 1]).unwrap();
        let lm = LetterMaps::from_coloring(&phi).unwrap();
        assert_eq!(lm.maps(), &[vec![0], vec![0]]);
        let g = Arc::new(fixtures::two_cycle());
        let not_bernoulli = GraphHom::identity(g);
        assert!(LetterMaps::from_coloring(&not_bernoulli).is_err());
    }

    #[test]
    fn bernoulli_extension_letter_maps() {
        let rho = fixtures::rho_pq(r(1, 3));
        let e = fixtures::bernoulli_extension(
            &rho,
            vec![crate::perm::Permutation::identity(2), crate::perm::Permutation::transposition(2, 0, 1)],
        );
        let (g, labels) = e.total_graph();
        let phi = coloring(Arc::new(g), &rho, labels).unwrap();
        let lm = LetterMaps::from_coloring(&phi).unwrap();
        assert_eq!(lm.map(0), &[0, 1]);
        assert_eq!(lm.map(1), &[1, 0]);
    }

    #[test]
    fn coloring_counts() {
        let fdr = fixtures::drunkard_ruin(3, r(1, 3));
        let all: Vec<_> = enumerate_colorings(&fdr.graph, &fdr.rho, ColoringBudget::default())
            .unwrap()
            .collect();
        assert_eq!(all, vec![fdr.labels.clone()]);

        let half = fixtures::rho_pq(r(1, 2));
        let e = fixtures::bernoulli_extension(
            &half,
            vec![crate::perm::Permutation::identity(2), crate::perm::Permutation::transposition(2, 0, 1)],
        );
        let (g, _) = e.total_graph();
        let mut stream = enumerate_colorings(&g, &half, ColoringBudget::default()).unwrap();
        let all: Vec<_> = stream.by_ref().collect();
        assert_eq!(all.len(), 4);
        assert!(!stream.truncated());
        assert_eq!(coloring_count(&g, &half), 4);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 4);

        let b = fixtures::bernoulli_graph_pq(r(1, 3));
        assert_eq!(enumerate_colorings(&b, &fixtures::rho_pq(r(1, 3)), ColoringBudget::default()).unwrap().count(), 1);
    }

    #[test]
    fn coloring_budget_truncates_explicitly() {
        let half = fixtures::rho_pq(r(1, 2));
        let g = fixtures::bernoulli_graph_pq(r(1, 2)).stringing(3).unwrap().graph;
        let mut stream = enumerate_colorings(
            &g,
            &half,
            ColoringBudget {
                max_colorings: 5,
                time_limit: None,
            },
        )
        .unwrap();
        assert_eq!(stream.by_ref().count(), 5);
        assert!(stream.truncated());
        assert!(enumerate_colorings(&g, &fixtures::rho_pq(r(1, 3)), ColoringBudget::default()).is_err());
    }

    #[test]
    fn apply_word_conventions() {
        let fdr = fixtures::drunkard_ruin(3, r(1, 3));
        let lm = &fdr.base;
        assert_eq!(lm.apply_word(&Word::empty(), 2), 2);
        let w000 = Word::parse("000", &fdr.rho).unwrap();
        for u in 0..3 {
            assert_eq!(lm.apply_word(&w000, u), 0);
        }
        // f1(f0(3)) = f1(2) = 3
        assert_eq!(lm.apply_word(&Word::parse("10", &fdr.rho).unwrap(), 2), 2);
        assert!(Word::parse("012", &fdr.rho).is_err());
        assert!(lm.try_apply_word(&Word::new(vec![7]), 0).is_err());
    }

    #[test]
    fn factor_prefix_maps_edgewise() {
        let fdr = fixtures::drunkard_ruin(3, r(1, 3));
        let g = Arc::new(fdr.graph.clone());
        let phi = coloring(g.clone(), &fdr.rho, fdr.labels.clone()).unwrap();
        // traverse (0, 2) then (1, 1): backward path "1:1 0:2"
        let p = Path::new(&g, vec![g.edge_id("1:1").unwrap(), g.edge_id("0:2").unwrap()]).unwrap();
        let img = phi.factor_prefix(&p).unwrap();
        assert_eq!(img.edges(), &[1, 0]);
        assert_eq!(img.weight(phi.target()), p.weight(&g));
        let id = GraphHom::identity(g.clone());
        assert_eq!(id.factor_prefix(&p).unwrap(), p);
    }
}
