//! Reducing partitions of the base and the quotient to an irreducible pair.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extension::{emit_gsp, persistent_partitions, GspExtension, PersistentCensus, PersistentFunction, VertexPartition};
use crate::homo::{check_hom, GraphHom, LetterMaps};
use crate::perm::Permutation;

#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub census: PersistentCensus,
    pub xi_zero: VertexPartition,
    pub xi_star: VertexPartition,
    /// `w(j) = c(j)` for the first persistent function `c`.
    pub relabel: Vec<Permutation>,
    /// The input with cocycle `w(f_i j)·a(i, j)·w(j)⁻¹`.
    pub recoordinatized: GspExtension,
    pub quotient: GspExtension,
    pub irreducible: bool,
}

/// Coarsest partition on which every `c′·c⁻¹` is constant.
///
/// Comparing each function against the first one is enough: if `c′c₀⁻¹` and
/// `cc₀⁻¹` are constant on a block, so is `c′c⁻¹`.
pub fn xi_zero(census: &PersistentCensus) -> Result<VertexPartition> {
    if !census.exhausted {
        return Err(Error::Precondition("persistent census is incomplete".into()));
    }
    let first = census
        .functions
        .first()
        .ok_or_else(|| Error::Precondition("no persistent functions".into()))?;
    let n = first.values().len();
    let signatures: Vec<Vec<Permutation>> = (0..n)
        .map(|j| {
            let inv = first.value(j).inverse();
            census.functions.iter().map(|c| c.value(j) * &inv).collect()
        })
        .collect();
    Ok(VertexPartition::from_labels(&signatures))
}

/// Coarsest refinement of `seed` that is a forward congruence for every `f_i`.
pub fn coarsest_congruence(seed: &VertexPartition, base: &LetterMaps) -> VertexPartition {
    let mut label = seed.block_of();
    let mut count = seed.len();
    loop {
        let keys: Vec<Vec<usize>> = (0..label.len())
            .map(|j| {
                let mut k = vec![label[j]];
                k.extend((0..base.letter_count()).map(|i| label[base.apply(i, j)]));
                k
            })
            .collect();
        let next = VertexPartition::from_labels(&keys);
        if next.len() == count {
            return next;
        }
        count = next.len();
        label = next.block_of();
    }
}

pub fn is_congruence(xi: &VertexPartition, base: &LetterMaps) -> bool {
    let of = xi.block_of();
    xi.blocks().iter().all(|b| {
        (0..base.letter_count()).all(|i| b.iter().all(|&j| of[base.apply(i, j)] == of[base.apply(i, b[0])]))
    })
}

fn block_constant(e: &GspExtension, xi: &VertexPartition) -> bool {
    xi.blocks().iter().all(|b| {
        (0..e.rho().len()).all(|i| b.iter().all(|&j| e.cocycle(i, j) == e.cocycle(i, b[0])))
    })
}

/// Relabels fibers by `w = c` so the cocycle becomes constant on the blocks of `xi`.
pub fn recoordinatize(
    e: &GspExtension,
    c: &PersistentFunction,
    xi: &VertexPartition,
) -> Result<(Vec<Permutation>, GspExtension)> {
    let w = c.values().to_vec();
    let cocycle = (0..e.rho().len())
        .map(|i| {
            (0..e.j_count())
                .map(|j| &(&w[e.base().apply(i, j)] * e.cocycle(i, j)) * &w[j].inverse())
                .collect()
        })
        .collect();
    let out = e.with_cocycle(cocycle)?;
    if !block_constant(&out, xi) {
        return Err(Error::Invariant(
            "recoordinatized cocycle is not constant on the partition blocks".into(),
        ));
    }
    Ok((w, out))
}

/// The pair on `J/xi`; each block is represented by its smallest vertex.
pub fn quotient(e: &GspExtension, xi: &VertexPartition) -> Result<GspExtension> {
    if !is_congruence(xi, e.base()) {
        return Err(Error::Precondition("partition is not a forward congruence".into()));
    }
    if !block_constant(e, xi) {
        return Err(Error::Precondition("cocycle is not constant on the partition blocks".into()));
    }
    let of = xi.block_of();
    let reps: Vec<usize> = xi.blocks().iter().map(|b| b[0]).collect();
    let names = reps.iter().map(|&j| e.base().vertex_name(j).to_string()).collect();
    let maps = (0..e.rho().len())
        .map(|i| reps.iter().map(|&j| of[e.base().apply(i, j)]).collect())
        .collect();
    let cocycle = (0..e.rho().len())
        .map(|i| reps.iter().map(|&j| e.cocycle(i, j).clone()).collect())
        .collect();
    GspExtension::new(LetterMaps::new(e.rho().clone(), names, maps)?, cocycle, e.d())
}

/// The block maps `κ : H → H/ξ` and `κ̄ : H̄ → H̄/ξ`, validated as homomorphisms.
pub fn quotient_homs(e: &GspExtension, xi: &VertexPartition, q: &GspExtension) -> Result<(GraphHom, GraphHom)> {
    let of = xi.block_of();
    let (h, _) = e.base_graph();
    let (hq, _) = q.base_graph();
    let mut kappa = vec![0; h.edge_count()];
    let (hbar, _) = e.total_graph();
    let (hbar_q, _) = q.total_graph();
    let mut kappa_bar = vec![0; hbar.edge_count()];
    for i in 0..e.rho().len() {
        for j in 0..e.j_count() {
            kappa[e.base_edge(i, j)] = q.base_edge(i, of[j]);
            for y in 0..e.d() {
                kappa_bar[e.total_edge(i, j, y)] = q.total_edge(i, of[j], y);
            }
        }
    }
    let kappa = check_hom(kappa, Arc::new(h), Arc::new(hq))?;
    let kappa_bar = check_hom(kappa_bar, Arc::new(hbar), Arc::new(hbar_q))?;
    Ok((kappa, kappa_bar))
}

pub fn reduce_to_irreducible(e: &GspExtension, budget: usize) -> Result<ReductionResult> {
    let census = persistent_partitions(e, budget)?;
    if !census.exhausted {
        return Err(Error::BudgetExceeded {
            what: "persistent",
            limit: budget,
        });
    }
    let xi0 = xi_zero(&census)?;
    let xi_star = coarsest_congruence(&xi0, e.base());
    let (relabel, recoordinatized) = recoordinatize(e, &census.functions[0], &xi_star)?;
    let quotient = quotient(&recoordinatized, &xi_star)?;
    let irreducible = xi_star.is_singletons();
    Ok(ReductionResult {
        census,
        xi_zero: xi0,
        xi_star,
        relabel,
        recoordinatized,
        quotient,
        irreducible,
    })
}

/// Quotient extension text, then `xi-block`, `relabel` and `irreducible=` lines.
pub fn emit_reduction(e: &GspExtension, r: &ReductionResult) -> String {
    let mut out = emit_gsp(&r.quotient);
    for b in r.xi_star.blocks() {
        let names: Vec<&str> = b.iter().map(|&j| e.base().vertex_name(j)).collect();
        let _ = writeln!(out, "xi-block {}", names.join(" "));
    }
    for (j, w) in r.relabel.iter().enumerate() {
        let _ = writeln!(out, "relabel {} {}", e.base().vertex_name(j), w);
    }
    let _ = writeln!(out, "irreducible={}", r.irreducible);
    out
}

/// Block index per vertex, keyed by name — convenient for reports.
pub fn block_names(e: &GspExtension, xi: &VertexPartition) -> HashMap<String, usize> {
    let of = xi.block_of();
    (0..e.j_count()).map(|j| (e.base().vertex_name(j).to_string(), of[j])).collect()
}
