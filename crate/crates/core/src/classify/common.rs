//! Degree-1 common extensions.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use super::{check_degree_one, cohomologous, shifts_isomorphic, IsoStatus, SearchConfig};
use crate::contraction::{self, synchronizing_word};
use crate::error::{Error, Result};
use crate::extension::GspExtension;
use crate::graph::{Rho, StochasticGraph};
use crate::homo::{check_hom, coloring, enumerate_colorings, ColoringBudget, GraphHom, LetterMaps};
use crate::perm::Permutation;

/// The synchronized-pair base over two degree-1 bases.
#[derive(Debug, Clone)]
pub struct CommonBase {
    pub base: LetterMaps,
    /// `(j₁, j₂)` per vertex, sorted.
    pub pairs: Vec<(usize, usize)>,
    /// Coordinate projections onto the two base graphs.
    pub chi: [GraphHom; 2],
    pub psi: GraphHom,
}

/// `J` = forward orbit of a pair synchronized by one word for both automata.
pub fn common_extension_degree1(b1: &LetterMaps, b2: &LetterMaps, budget: usize) -> Result<CommonBase> {
    if b1.rho() != b2.rho() {
        return Err(Error::Precondition("bases are over different alphabets".into()));
    }
    let no_sync = || Error::Precondition("base is not 1-contractive".into());
    let w1 = synchronizing_word(b1).ok_or_else(no_sync)?;
    let w2 = synchronizing_word(b2).ok_or_else(no_sync)?;
    // w₂ acts first and collapses the second automaton; then w₁ collapses the first
    let w = w1.concat(&w2);
    let start = (b1.apply_word(&w, 0), b2.apply_word(&w, 0));
    let mut seen = BTreeMap::from([(start, ())]);
    let mut queue = VecDeque::from([start]);
    while let Some((x, y)) = queue.pop_front() {
        for i in 0..b1.letter_count() {
            let next = (b1.apply(i, x), b2.apply(i, y));
            if seen.insert(next, ()).is_none() {
                queue.push_back(next);
            }
        }
    }
    let pairs: Vec<(usize, usize)> = seen.into_keys().collect();
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let names = pairs
        .iter()
        .map(|&(x, y)| format!("{}|{}", b1.vertex_name(x), b2.vertex_name(y)))
        .collect();
    let maps = (0..b1.letter_count())
        .map(|i| pairs.iter().map(|&(x, y)| index[&(b1.apply(i, x), b2.apply(i, y))]).collect())
        .collect();
    let base = LetterMaps::new(b1.rho().clone(), names, maps)?;
    let rep = contraction::degree(&base, budget);
    if !rep.exhausted || rep.degree != 1 {
        return Err(Error::Invariant("common base is not 1-contractive".into()));
    }
    let (h, labels) = base.graph()?;
    let h = Arc::new(h);
    let psi = coloring(h.clone(), b1.rho(), labels)?;
    let m = pairs.len();
    let mut chi = Vec::with_capacity(2);
    for (k, bk) in [b1, b2].into_iter().enumerate() {
        let (hk, lk) = bk.graph()?;
        let hk = Arc::new(hk);
        let nk = bk.vertex_count();
        let map = (0..base.letter_count() * m)
            .map(|e| {
                let (i, p) = (e / m, pairs[e % m]);
                i * nk + if k == 0 { p.0 } else { p.1 }
            })
            .collect();
        let hom = check_hom(map, h.clone(), hk.clone())?;
        check_degree_one(&hom, &coloring(hk, bk.rho(), lk)?, budget, "common base projection")?;
        chi.push(hom);
    }
    let chi: [GraphHom; 2] = chi.try_into().expect("two projections");
    Ok(CommonBase { base, pairs, chi, psi })
}

/// A graph with degree-1 homomorphisms onto both inputs.
#[derive(Debug, Clone)]
pub struct CommonExtension {
    pub common_base: CommonBase,
    /// The skew product over the common base, pulled back from the first lift.
    pub extension: GspExtension,
    pub graph: Arc<StochasticGraph>,
    pub labels: Vec<usize>,
    /// Degree-1 maps onto `g1` and `g2`.
    pub to: [GraphHom; 2],
    /// Fiber relabeling identifying the two pulled-back cocycles.
    pub v: Vec<Permutation>,
}

/// Builds a common degree-1 extension of two isomorphic shifts.
pub fn common_extension_shifts(
    g1: &StochasticGraph,
    g2: &StochasticGraph,
    rho: &Rho,
    config: &SearchConfig,
) -> Result<CommonExtension> {
    let verdict = shifts_isomorphic(g1, g2, rho, config)?;
    if verdict.status != IsoStatus::Yes {
        return Err(Error::Precondition(format!(
            "shifts are not known to be isomorphic (verdict {})",
            verdict.status.as_str()
        )));
    }
    let [Some(c1), Some(c2)] = &verdict.canon else {
        return Err(Error::Invariant("YES verdict without canonical forms".into()));
    };
    let (l1, l2) = (&c1.lift.extension, &c2.lift.extension);
    let cb = common_extension_degree1(l1.base(), l2.base(), config.subset_budget)?;
    let d = l1.d();
    let pull = |l: &GspExtension, second: bool| -> Vec<Vec<Permutation>> {
        (0..rho.len())
            .map(|i| {
                cb.pairs
                    .iter()
                    .map(|&(x, y)| l.cocycle(i, if second { y } else { x }).clone())
                    .collect()
            })
            .collect()
    };
    let (b1, b2) = (pull(l1, false), pull(l2, true));
    let v = cohomologous(&cb.base, &b1, &b2, d)
        .ok_or_else(|| Error::Invariant("pulled-back cocycles are not cohomologous".into()))?;
    let extension = GspExtension::new(cb.base.clone(), b1, d)?;
    let (g, labels) = extension.total_graph();
    let g = Arc::new(g);
    let m = cb.pairs.len();

    let mut to = Vec::with_capacity(2);
    for (k, (canon, target)) in [(c1, g1), (c2, g2)].into_iter().enumerate() {
        let l = &canon.lift.extension;
        let map = (0..g.edge_count())
            .map(|e| {
                let (ip, y) = (e / d, e % d);
                let (i, p) = (ip / m, ip % m);
                let (x, z) = cb.pairs[p];
                if k == 0 {
                    l.total_edge(i, x, y)
                } else {
                    l.total_edge(i, z, v[p].apply(y))
                }
            })
            .collect();
        let (hbar, _) = l.total_graph();
        let to_hbar = check_hom(map, g.clone(), Arc::new(hbar))?;
        let to_g = to_hbar.then(&canon.lift.psi_bar)?.then(&canon.pi_n)?;
        let chi_labels = enumerate_colorings(target, rho, ColoringBudget::default())?
            .next()
            .ok_or(Error::NotRhoUniform)?;
        let chi = coloring(to_g.target().clone(), rho, chi_labels)?;
        check_degree_one(&to_g, &chi, config.subset_budget, "common extension")?;
        to.push(to_g);
    }
    let to: [GraphHom; 2] = to.try_into().expect("two maps");
    Ok(CommonExtension {
        common_base: cb,
        extension,
        graph: g,
        labels,
        to,
        v,
    })
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
    fn identical_bases_give_the_diagonal() {
        let fdr = fixtures::drunkard_ruin(3, r(1, 3));
        let cb = common_extension_degree1(&fdr.base, &fdr.base, 1 << 16).unwrap();
        assert_eq!(cb.pairs, vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn drunkard_two_and_three() {
        let a = fixtures::drunkard_ruin(2, r(1, 3));
        let b = fixtures::drunkard_ruin(3, r(1, 3));
        let cb = common_extension_degree1(&a.base, &b.base, 1 << 16).unwrap();
        // the walls keep the two walkers within one step of each other
        assert_eq!(cb.pairs, vec![(0, 0), (0, 1), (1, 1), (1, 2)]);
    }

    #[test]
    fn relabeled_graph_has_a_common_extension() {
        let e = fixtures::drunkard_z2(2, r(1, 3));
        let g = e.total_graph().0;
        let order: Vec<usize> = vec![3, 1, 0, 2];
        let eorder: Vec<usize> = (0..g.edge_count()).rev().collect();
        let h = g.relabeled(&order, &eorder);
        let ce = common_extension_shifts(&g, &h, e.rho(), &SearchConfig::default()).unwrap();
        assert_eq!(ce.graph.vertex_count(), g.vertex_count());
        assert_eq!(**ce.to[1].target(), h);
    }

    #[test]
    fn non_isomorphic_inputs_are_rejected() {
        let a = fixtures::drunkard_z2(3, r(1, 3)).total_graph().0;
        let b = fixtures::drunkard_z2(4, r(1, 3)).total_graph().0;
        let err = common_extension_shifts(&a, &b, &fixtures::rho_pq(r(1, 3)), &SearchConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
