//! Graph skew products `H̄ = I × J × Y_d` over a degree-1 base, the lift of a
//! coloring to such a pair, and persistent transversal partitions.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::contraction::{self, ContractionReport};
use crate::error::{Error, Result};
use crate::graph::sgf::{emit_sgf, parse_document};
use crate::graph::{EdgeSpec, Rho, StochasticGraph};
use crate::homo::{check_hom, coloring, GraphHom, LetterMaps, Word};
use crate::perm::Permutation;

/// The pair `(π, ψ)`: base letter maps `f_i` on `J` and a cocycle `a(i, j) ∈ A_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GspExtension {
    base: LetterMaps,
    cocycle: Vec<Vec<Permutation>>,
    d: usize,
}

impl GspExtension {
    /// Shape checks only; use [`build_gsp`] to also validate the base.
    pub fn new(base: LetterMaps, cocycle: Vec<Vec<Permutation>>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidExtension("fiber size must be positive".into()));
        }
        if cocycle.len() != base.letter_count() {
            return Err(Error::InvalidExtension(format!(
                "cocycle has {} letters, base has {}",
                cocycle.len(),
                base.letter_count()
            )));
        }
        for (i, row) in cocycle.iter().enumerate() {
            if row.len() != base.vertex_count() {
                return Err(Error::InvalidExtension(format!(
                    "cocycle is not total for letter `{}`",
                    base.rho().letter(i)
                )));
            }
            if let Some(p) = row.iter().find(|p| p.degree() != d) {
                return Err(Error::InvalidExtension(format!("permutation {p} does not act on {d} points")));
            }
        }
        Ok(GspExtension { base, cocycle, d })
    }

    pub fn rho(&self) -> &Rho {
        self.base.rho()
    }

    pub fn base(&self) -> &LetterMaps {
        &self.base
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn j_count(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn cocycle(&self, i: usize, j: usize) -> &Permutation {
        &self.cocycle[i][j]
    }

    /// Indexed `[letter][vertex]`.
    pub fn cocycles(&self) -> &[Vec<Permutation>] {
        &self.cocycle
    }

    pub fn with_cocycle(&self, cocycle: Vec<Vec<Permutation>>) -> Result<Self> {
        GspExtension::new(self.base.clone(), cocycle, self.d)
    }

    /// Index of `(j, y)` in `H̄`.
    pub fn total_vertex(&self, j: usize, y: usize) -> usize {
        j * self.d + y
    }

    /// Index of the edge `(i, j, y)` in `H̄`.
    pub fn total_edge(&self, i: usize, j: usize, y: usize) -> usize {
        (i * self.j_count() + j) * self.d + y
    }

    /// Index of the edge `(i, j)` in `H`.
    pub fn base_edge(&self, i: usize, j: usize) -> usize {
        i * self.j_count() + j
    }

    /// `H` with its letter labels.
    pub fn base_graph(&self) -> (StochasticGraph, Vec<usize>) {
        self.base.graph().expect("letter maps always define a stochastic graph")
    }

    fn total_vertex_name(&self, j: usize, y: usize) -> String {
        if self.d == 1 {
            self.base.vertex_name(j).to_string()
        } else {
            format!("{}.{}", self.base.vertex_name(j), y + 1)
        }
    }

    /// `H̄` with `t(i, j, y) = (f_i j, a(i, j) y)` and its letter labels.
    pub fn total_graph(&self) -> (StochasticGraph, Vec<usize>) {
        let (nj, d) = (self.j_count(), self.d);
        let rho = self.rho();
        let mut vertices = Vec::with_capacity(nj * d);
        for j in 0..nj {
            for y in 0..d {
                vertices.push(self.total_vertex_name(j, y));
            }
        }
        let mut edges = Vec::with_capacity(rho.len() * nj * d);
        let mut labels = Vec::with_capacity(rho.len() * nj * d);
        for i in 0..rho.len() {
            for j in 0..nj {
                let fj = self.base.apply(i, j);
                for y in 0..d {
                    edges.push(EdgeSpec::new(
                        format!("{}:{}", rho.letter(i), self.total_vertex_name(j, y)),
                        self.total_vertex(j, y),
                        self.total_vertex(fj, self.cocycle[i][j].apply(y)),
                        rho.weight(i).clone(),
                    ));
                    labels.push(i);
                }
            }
        }
        let g = StochasticGraph::new(None, vertices, edges).expect("skew product is a stochastic graph");
        (g, labels)
    }

    /// `f̄_i(j, y) = (f_i j, a(i, j) y)`.
    pub fn extended_letter_maps(&self) -> LetterMaps {
        let (nj, d) = (self.j_count(), self.d);
        let mut names = Vec::with_capacity(nj * d);
        for j in 0..nj {
            for y in 0..d {
                names.push(self.total_vertex_name(j, y));
            }
        }
        let maps = (0..self.rho().len())
            .map(|i| {
                (0..nj * d)
                    .map(|v| {
                        let (j, y) = (v / d, v % d);
                        self.total_vertex(self.base.apply(i, j), self.cocycle[i][j].apply(y))
                    })
                    .collect()
            })
            .collect();
        LetterMaps::new(self.rho().clone(), names, maps).expect("extended maps are total")
    }

    /// The fiber projection `π : H̄ → H`.
    pub fn projection(&self) -> GraphHom {
        let (hbar, _) = self.total_graph();
        let (h, _) = self.base_graph();
        let map = (0..hbar.edge_count()).map(|e| e / self.d).collect();
        check_hom(map, Arc::new(hbar), Arc::new(h)).expect("fiber projection is a homomorphism")
    }

    /// The coloring `ψ : H → I`.
    pub fn base_coloring(&self) -> GraphHom {
        let (h, labels) = self.base_graph();
        coloring(Arc::new(h), self.rho(), labels).expect("base labels form a coloring")
    }

    pub fn is_total_irreducible(&self) -> bool {
        self.total_graph().0.is_irreducible()
    }

    /// The cocycle along a word: `f̄_w(j, y) = (f_w j, a_w(j) y)`.
    pub fn word_cocycle(&self, w: &Word, j: usize) -> Permutation {
        let mut cur = j;
        let mut acc = Permutation::identity(self.d);
        for &i in w.letters().iter().rev() {
            acc = &self.cocycle[i][cur] * &acc;
            cur = self.base.apply(i, cur);
        }
        acc
    }

    /// The same pair with `J` renumbered: new vertex `k` is old vertex `order[k]`.
    pub fn relabel_base(&self, order: &[usize]) -> Result<Self> {
        let n = self.j_count();
        let mut inv = vec![usize::MAX; n];
        for (k, &j) in order.iter().enumerate() {
            if j >= n || inv[j] != usize::MAX {
                return Err(Error::InvalidExtension("relabeling is not a permutation of J".into()));
            }
            inv[j] = k;
        }
        if order.len() != n {
            return Err(Error::InvalidExtension("relabeling is not a permutation of J".into()));
        }
        let names = order.iter().map(|&j| self.base.vertex_name(j).to_string()).collect();
        let maps = (0..self.rho().len())
            .map(|i| order.iter().map(|&j| inv[self.base.apply(i, j)]).collect())
            .collect();
        let cocycle = self
            .cocycle
            .iter()
            .map(|row| order.iter().map(|&j| row[j].clone()).collect())
            .collect();
        GspExtension::new(LetterMaps::new(self.rho().clone(), names, maps)?, cocycle, self.d)
    }
}

/// Builds a GSP, validating that the base letter maps are 1-contractive.
pub fn build_gsp(base: LetterMaps, cocycle: Vec<Vec<Permutation>>, d: usize, budget: usize) -> Result<GspExtension> {
    let report = contraction::degree(&base, budget);
    if !report.exhausted && report.degree > 1 {
        return Err(Error::BudgetExceeded {
            what: "subset",
            limit: budget,
        });
    }
    if report.degree != 1 {
        return Err(Error::InvalidExtension(format!(
            "base letter maps have degree {}, expected 1",
            report.degree
        )));
    }
    GspExtension::new(base, cocycle, d)
}

/// Result of putting a d-extension `φ : G → H` into skew-product form.
#[derive(Debug, Clone)]
pub struct GspNormalization {
    pub extension: GspExtension,
    /// The isomorphism `κ : G → H̄`.
    pub kappa: GraphHom,
}

/// Normalizes a d-extension `phi : G → H` over a colored base `psi : H → I`.
///
/// Fiber positions are assigned by vertex-id order within each fiber.
pub fn gsp_normalize(phi: &GraphHom, psi: &GraphHom, budget: usize) -> Result<GspNormalization> {
    if !Arc::ptr_eq(phi.target(), psi.source()) && **phi.target() != **psi.source() {
        return Err(Error::Precondition("psi must be defined on the target of phi".into()));
    }
    let g = phi.source();
    let h = phi.target();
    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); h.vertex_count()];
    let mut pos = vec![0usize; g.vertex_count()];
    for (x, &u) in phi.vertex_map().iter().enumerate() {
        pos[x] = fibers[u].len();
        fibers[u].push(x);
    }
    let d = fibers[0].len();
    if fibers.iter().any(|f| f.len() != d) {
        return Err(Error::InvalidExtension("fibers of phi have unequal sizes".into()));
    }
    let mut edge_fibers: Vec<Vec<usize>> = vec![Vec::new(); h.edge_count()];
    for (e, &he) in phi.edge_map().iter().enumerate() {
        edge_fibers[he].push(e);
    }
    if edge_fibers.iter().any(|f| f.len() != d) {
        return Err(Error::InvalidExtension("edge fibers of phi have unequal sizes".into()));
    }
    // a(h)(y) = position of t(g), where g is the preimage of h leaving the y-th point
    let mut a_of_edge = Vec::with_capacity(h.edge_count());
    for fiber in &edge_fibers {
        let mut images = vec![usize::MAX; d];
        for &e in fiber {
            let edge = g.edge(e);
            images[pos[edge.src]] = pos[edge.dst];
        }
        a_of_edge.push(Permutation::from_images(images)?);
    }
    let base = LetterMaps::from_coloring(psi)?;
    let cocycle: Vec<Vec<Permutation>> = (0..base.letter_count())
        .map(|i| {
            (0..base.vertex_count())
                .map(|j| a_of_edge[base.edge_of(i, j).expect("from a coloring")].clone())
                .collect()
        })
        .collect();
    let extension = build_gsp(base, cocycle, d, budget)?;
    let (hbar, _) = extension.total_graph();
    let kappa_map = (0..g.edge_count())
        .map(|e| {
            let he = phi.edge_map()[e];
            let i = psi.edge_map()[he];
            extension.total_edge(i, h.edge(he).src, pos[g.edge(e).src])
        })
        .collect();
    let kappa = check_hom(kappa_map, g.clone(), Arc::new(hbar))?;
    if !kappa.is_isomorphism() {
        return Err(Error::Invariant("normalization map is not an isomorphism".into()));
    }
    Ok(GspNormalization { extension, kappa })
}

/// The lifted pair for a coloring `φ : G → I`.
#[derive(Debug, Clone)]
pub struct Lift {
    pub extension: GspExtension,
    pub contraction: ContractionReport,
    /// `ψ̄ : H̄ → G`, `(i, j, y) ↦ g_{i, L_j[y]}`.
    pub psi_bar: GraphHom,
    /// `ψ : H → I`.
    pub psi: GraphHom,
    /// `π : H̄ → H`.
    pub pi: GraphHom,
}

/// Builds `H̄` from the persistent sets of `φ`'s semigroup and checks the diagram.
pub fn lift_phi_bar(phi: &GraphHom, budget: usize) -> Result<Lift> {
    let g = phi.source();
    if !g.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let lm = LetterMaps::from_coloring(phi)?;
    let report = contraction::degree(&lm, budget);
    if !report.exhausted {
        return Err(Error::BudgetExceeded {
            what: "subset",
            limit: budget,
        });
    }
    let sets = &report.persistent_sets;
    let d = report.degree;
    let index: HashMap<&[usize], usize> = sets.iter().enumerate().map(|(k, s)| (s.as_slice(), k)).collect();
    let mut maps = vec![vec![0; sets.len()]; lm.letter_count()];
    let mut cocycle = vec![Vec::with_capacity(sets.len()); lm.letter_count()];
    for i in 0..lm.letter_count() {
        for (j, set) in sets.iter().enumerate() {
            let image = lm.image(i, set);
            let &k = index
                .get(image.as_slice())
                .ok_or_else(|| Error::Invariant("persistent sets are not closed under the letter maps".into()))?;
            maps[i][j] = k;
            let images = set
                .iter()
                .map(|&u| sets[k].binary_search(&lm.apply(i, u)).expect("image lies in the target set"))
                .collect();
            cocycle[i].push(Permutation::from_images(images)?);
        }
    }
    let names = sets
        .iter()
        .map(|s| s.iter().map(|&u| lm.vertex_name(u)).collect::<Vec<_>>().join("+"))
        .collect();
    let base = LetterMaps::new(lm.rho().clone(), names, maps)?;
    let extension = build_gsp(base, cocycle, d, budget)?;

    let (hbar, _) = extension.total_graph();
    let mut psi_bar_map = vec![0; hbar.edge_count()];
    for i in 0..lm.letter_count() {
        for (j, set) in sets.iter().enumerate() {
            for (y, &u) in set.iter().enumerate() {
                psi_bar_map[extension.total_edge(i, j, y)] = lm.edge_of(i, u).expect("from a coloring");
            }
        }
    }
    let psi_bar = check_hom(psi_bar_map, Arc::new(hbar), g.clone())?;
    let pi = extension.projection();
    let psi = extension.base_coloring();
    for e in 0..psi_bar.source().edge_count() {
        if phi.edge_map()[psi_bar.edge_map()[e]] != psi.edge_map()[pi.edge_map()[e]] {
            return Err(Error::Invariant("lift diagram does not commute".into()));
        }
    }
    // d(φ∘ψ̄) = d(ψ∘π) = d; with d(φ) = d this gives d(ψ̄) = 1.
    let top = contraction::degree(&extension.extended_letter_maps(), budget);
    if !top.exhausted || top.degree != d {
        return Err(Error::Invariant(format!(
            "lifted extension has degree {} over I, expected {d}",
            top.degree
        )));
    }
    Ok(Lift {
        extension,
        contraction: report,
        psi_bar,
        psi,
        pi,
    })
}

/// A transversal partition `R_y = {(j, c(j)⁻¹ y)}`, stored with `c(0) = id`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PersistentFunction {
    c: Vec<Permutation>,
}

impl PersistentFunction {
    /// Left-multiplies by `c(0)⁻¹`; the partition is unchanged.
    pub fn normalized(c: Vec<Permutation>) -> Result<Self> {
        let first = c
            .first()
            .ok_or_else(|| Error::InvalidExtension("persistent function on an empty set".into()))?
            .inverse();
        Ok(PersistentFunction {
            c: c.iter().map(|p| &first * p).collect(),
        })
    }

    pub fn values(&self) -> &[Permutation] {
        &self.c
    }

    pub fn value(&self, j: usize) -> &Permutation {
        &self.c[j]
    }

    pub fn d(&self) -> usize {
        self.c[0].degree()
    }

    /// `j ↦ c(f_i j)·a(i, j)`, normalized.
    pub fn append(&self, e: &GspExtension, i: usize) -> PersistentFunction {
        let c = (0..e.j_count())
            .map(|j| &self.c[e.base().apply(i, j)] * e.cocycle(i, j))
            .collect();
        PersistentFunction::normalized(c).expect("nonempty")
    }

    pub fn partition(&self) -> VertexPartition {
        partition_of(self)
    }
}

/// Blocks over `J × Y_d` (vertex `(j, y)` has index `j·d + y`).
pub fn partition_of(c: &PersistentFunction) -> VertexPartition {
    let d = c.d();
    let n = c.values().len();
    let mut blocks = vec![Vec::with_capacity(n); d];
    for (j, p) in c.values().iter().enumerate() {
        let inv = p.inverse();
        for (y, block) in blocks.iter_mut().enumerate() {
            block.push(j * d + inv.apply(y));
        }
    }
    VertexPartition::new(blocks, n * d).expect("transversal blocks cover J × Y_d")
}

/// A set partition in canonical form: sorted blocks ordered by minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidExtension("empty block".into()));
            }
            b.sort_unstable();
            for &v in b.iter() {
                if v >= n || seen[v] {
                    return Err(Error::InvalidExtension("blocks do not form a partition".into()));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidExtension("blocks do not cover the vertex set".into()));
        }
        blocks.sort();
        Ok(VertexPartition { blocks })
    }

    /// Blocks are the classes of equal labels.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut index: HashMap<&T, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (v, l) in labels.iter().enumerate() {
            let k = *index.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[k].push(v);
        }
        VertexPartition { blocks }
    }

    pub fn singletons(n: usize) -> Self {
        VertexPartition {
            blocks: (0..n).map(|v| vec![v]).collect(),
        }
    }

    pub fn whole(n: usize) -> Self {
        VertexPartition {
            blocks: if n == 0 { vec![] } else { vec![(0..n).collect()] },
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block index of each vertex.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.vertex_count()];
        for (k, b) in self.blocks.iter().enumerate() {
            for &v in b {
                out[v] = k;
            }
        }
        out
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &VertexPartition) -> bool {
        let of = other.block_of();
        self.blocks.iter().all(|b| b.iter().all(|&v| of[v] == of[b[0]]))
    }
}

/// Persistent functions found, with a completeness flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistentCensus {
    /// Sorted; `functions[0]` is the lexicographically first.
    pub functions: Vec<PersistentFunction>,
    pub exhausted: bool,
}

pub const DEFAULT_PERSISTENT_BUDGET: usize = 1 << 20;

/// All persistent functions: the closure of one synchronized cocycle under appending letters.
///
/// If `f_w` is constant then `c_{w0·w} = const · c_w`, so every synchronized
/// state is reached from a fixed synchronizing `w0` by appending.
pub fn persistent_partitions(e: &GspExtension, budget: usize) -> Result<PersistentCensus> {
    let w0 = contraction::synchronizing_word(e.base())
        .ok_or_else(|| Error::Precondition("base letter maps are not 1-contractive".into()))?;
    let start =
        PersistentFunction::normalized((0..e.j_count()).map(|j| e.word_cocycle(&w0, j)).collect())?;
    let mut seen: HashSet<PersistentFunction> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut exhausted = true;
    'bfs: while let Some(c) = queue.pop_front() {
        for i in 0..e.rho().len() {
            let next = c.append(e, i);
            if !seen.contains(&next) {
                if seen.len() >= budget {
                    exhausted = false;
                    break 'bfs;
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    let mut functions: Vec<_> = seen.into_iter().collect();
    functions.sort();
    Ok(PersistentCensus { functions, exhausted })
}

/// The same census by BFS over all pairs `(f_w, c_w)` from the empty word.
pub fn persistent_partitions_by_pairs(e: &GspExtension, budget: usize) -> Result<PersistentCensus> {
    let n = e.j_count();
    let start: (Vec<usize>, Vec<Permutation>) = ((0..n).collect(), vec![Permutation::identity(e.d()); n]);
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut found: HashSet<PersistentFunction> = HashSet::new();
    let mut exhausted = true;
    'bfs: while let Some((f, c)) = queue.pop_front() {
        if f.iter().all(|&v| v == f[0]) {
            found.insert(PersistentFunction::normalized(c.clone())?);
        }
        for i in 0..e.rho().len() {
            let nf: Vec<usize> = (0..n).map(|j| f[e.base().apply(i, j)]).collect();
            let nc: Vec<Permutation> = (0..n).map(|j| &c[e.base().apply(i, j)] * e.cocycle(i, j)).collect();
            let state = (nf, nc);
            if !seen.contains(&state) {
                if seen.len() >= budget {
                    exhausted = false;
                    break 'bfs;
                }
                seen.insert(state.clone());
                queue.push_back(state);
            }
        }
    }
    let mut functions: Vec<_> = found.into_iter().collect();
    functions.sort();
    Ok(PersistentCensus { functions, exhausted })
}

/// SGF of `H` (labels included) followed by `cocycle <letter> <vertex> <perm>` lines.
pub fn emit_gsp(e: &GspExtension) -> String {
    let (h, labels) = e.base_graph();
    let mut out = emit_sgf(&h, Some(e.rho()), Some(&labels));
    for i in 0..e.rho().len() {
        for j in 0..e.j_count() {
            let _ = writeln!(
                out,
                "cocycle {} {} {}",
                e.rho().letter(i),
                e.base().vertex_name(j),
                e.cocycle(i, j)
            );
        }
    }
    out
}

/// Parses [`emit_gsp`] output (any labeled ρ-uniform base with a total cocycle).
pub fn parse_gsp(text: &str, budget: usize) -> Result<GspExtension> {
    let doc = parse_document(text, true)?;
    let rho = doc
        .rho
        .ok_or_else(|| Error::InvalidExtension("extension file needs rho lines".into()))?;
    let labels = doc
        .labels
        .ok_or_else(|| Error::InvalidExtension("extension file needs a full edge labeling".into()))?;
    let h = Arc::new(doc.graph);
    let psi = coloring(h.clone(), &rho, labels)?;
    let base = LetterMaps::from_coloring(&psi)?;
    let first = doc
        .cocycles
        .first()
        .ok_or_else(|| Error::InvalidExtension("no cocycle lines".into()))?;
    let d = first.perm.degree();
    let mut cocycle: Vec<Vec<Option<Permutation>>> = vec![vec![None; base.vertex_count()]; rho.len()];
    for line in &doc.cocycles {
        let err = |m: String| Error::Parse {
            line: line.line,
            message: m,
        };
        let i = rho
            .letter_index(&line.letter)
            .ok_or_else(|| err(format!("unknown letter `{}`", line.letter)))?;
        let j = h
            .vertex_id(&line.vertex)
            .ok_or_else(|| err(format!("unknown vertex `{}`", line.vertex)))?;
        if line.perm.degree() != d {
            return Err(err(format!("permutation acts on {} points, expected {d}", line.perm.degree())));
        }
        if cocycle[i][j].replace(line.perm.clone()).is_some() {
            return Err(err(format!("duplicate cocycle for ({}, {})", line.letter, line.vertex)));
        }
    }
    let mut full = Vec::with_capacity(rho.len());
    for (i, row) in cocycle.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, p) in row.into_iter().enumerate() {
            out.push(p.ok_or_else(|| {
                Error::InvalidExtension(format!(
                    "missing cocycle for ({}, {})",
                    rho.letter(i),
                    h.vertex_name(j)
                ))
            })?);
        }
        full.push(out);
    }
    build_gsp(base, full, d, budget)
}
