//! Small named examples used by tests, the CLI and the acceptance suite.

use crate::extension::GspExtension;
use crate::graph::{EdgeSpec, Rational, Rho, StochasticGraph};
use crate::homo::LetterMaps;
use crate::perm::Permutation;

use num_traits::One;

/// Letters `0`, `1` with weights `1 - p`, `p`.
pub fn rho_pq(p: Rational) -> Rho {
    let q = Rational::one() - &p;
    Rho::new(vec![("0", q), ("1", p)]).expect("0 < p < 1")
}

pub fn bernoulli_graph_pq(p: Rational) -> StochasticGraph {
    rho_pq(p).bernoulli_graph()
}

/// The gambler's-ruin walk on `1..n` with its unique coloring.
#[derive(Debug, Clone)]
pub struct DrunkardRuin {
    pub graph: StochasticGraph,
    pub rho: Rho,
    pub labels: Vec<usize>,
    pub base: LetterMaps,
}

/// Letter `1` (weight `p`) steps right, letter `0` steps left; both stop at the ends.
pub fn drunkard_ruin(n: usize, p: Rational) -> DrunkardRuin {
    assert!(n >= 1);
    let rho = rho_pq(p);
    let left: Vec<usize> = (0..n).map(|j| j.saturating_sub(1)).collect();
    let right: Vec<usize> = (0..n).map(|j| (j + 1).min(n - 1)).collect();
    let names: Vec<String> = (1..=n).map(|j| j.to_string()).collect();
    let mut edges = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(2 * n);
    for j in 0..n {
        for (i, dst) in [(0, left[j]), (1, right[j])] {
            edges.push(EdgeSpec::new(
                format!("{i}:{}", names[j]),
                j,
                dst,
                rho.weight(i).clone(),
            ));
            labels.push(i);
        }
    }
    let graph = StochasticGraph::new(Some(format!("drunkard{n}")), names.clone(), edges).expect("valid walk");
    let base = LetterMaps::new(rho.clone(), names, vec![left, right]).expect("total maps");
    DrunkardRuin {
        graph,
        rho,
        labels,
        base,
    }
}

/// The drunkard walk with a swap on the step `1` from vertex `1`.
pub fn drunkard_z2(n: usize, p: Rational) -> GspExtension {
    let fdr = drunkard_ruin(n, p);
    let mut cocycle = vec![vec![Permutation::identity(2); n]; 2];
    cocycle[1][0] = Permutation::transposition(2, 0, 1);
    GspExtension::new(fdr.base, cocycle, 2).expect("shapes match")
}

/// The skew product over the one-vertex Bernoulli graph with `a(i) = perms[i]`.
pub fn bernoulli_extension(rho: &Rho, perms: Vec<Permutation>) -> GspExtension {
    let d = perms[0].degree();
    let base = LetterMaps::new(rho.clone(), vec!["o".into()], vec![vec![0]; rho.len()]).expect("total maps");
    GspExtension::new(base, perms.into_iter().map(|p| vec![p]).collect(), d).expect("shapes match")
}

/// `a → b → a`, one edge each way.
pub fn two_cycle() -> StochasticGraph {
    StochasticGraph::new(
        Some("two-cycle".into()),
        vec!["a".into(), "b".into()],
        vec![
            EdgeSpec::new("ab", 0, 1, Rational::one()),
            EdgeSpec::new("ba", 1, 0, Rational::one()),
        ],
    )
    .expect("valid")
}

/// Two vertices with a loop each; not irreducible.
pub fn disjoint_loops() -> StochasticGraph {
    StochasticGraph::new(
        Some("loops".into()),
        vec!["x".into(), "y".into()],
        vec![
            EdgeSpec::new("lx", 0, 0, Rational::one()),
            EdgeSpec::new("ly", 1, 1, Rational::one()),
        ],
    )
    .expect("valid")
}
