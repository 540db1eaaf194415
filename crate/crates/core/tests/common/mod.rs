//! Brute-force oracles and random generators shared by the integration tests.
//!
//! The oracles work straight from letter-map tables and cocycle images; they
//! deliberately avoid the library's own search code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rhoshift::graph::EdgeSpec;
use rhoshift::homo::LetterMaps;
use rhoshift::{Permutation, Rational, Rho, StochasticGraph};

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Relabels blocks in order of first occurrence.
pub fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut seen = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(k) => k,
            None => {
                seen.push(*l);
                seen.len() - 1
            }
        })
        .collect()
}

/// Smallest `|f_w(U)|` over words of length ≤ `max_len`; the flag says whether
/// every reachable image was seen within that length.
pub fn brute_degree(maps: &[Vec<usize>], max_len: usize) -> (usize, bool) {
    let n = maps[0].len();
    let start: Vec<usize> = (0..n).collect();
    let mut seen = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    let mut best = n;
    for _ in 0..max_len {
        let mut next = Vec::new();
        for set in &frontier {
            for f in maps {
                let img: BTreeSet<usize> = set.iter().map(|&u| f[u]).collect();
                let img: Vec<usize> = img.into_iter().collect();
                best = best.min(img.len());
                if seen.insert(img.clone()) {
                    next.push(img);
                }
            }
        }
        if next.is_empty() {
            return (best, true);
        }
        frontier = next;
    }
    (best, false)
}

/// Every `c : J → A_d`, as image tables.
pub fn all_functions(j: usize, d: usize) -> Vec<Vec<Vec<usize>>> {
    let perms: Vec<Vec<usize>> = Permutation::all(d).into_iter().map(|p| p.images().to_vec()).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..j {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<usize>>| {
                perms.iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.push(p.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Transversal partitions of `J × Y_d` as canonical labelings of `j·d + y`.
pub fn transversal_partitions(j: usize, d: usize) -> BTreeSet<Vec<usize>> {
    all_functions(j, d)
        .into_iter()
        .map(|c| {
            let labels: Vec<usize> = (0..j * d).map(|v| c[v / d][v % d]).collect();
            canonical(&labels)
        })
        .collect()
}

/// `f̄_i(j, y) = (f_i j, a(i, j) y)`, from raw tables.
pub fn extended(maps: &[Vec<usize>], cocycle: &[Vec<Vec<usize>>], d: usize) -> Vec<Vec<usize>> {
    maps.iter()
        .zip(cocycle)
        .map(|(f, a)| (0..f.len() * d).map(|v| f[v / d] * d + a[v / d][v % d]).collect())
        .collect()
}

/// Transversal partitions `r` such that every transversal `r1` pulls back to
/// `r` along some word of length ≤ `max_len` (the whole of `J` taken as `E`).
pub fn brute_persistent(maps: &[Vec<usize>], cocycle: &[Vec<Vec<usize>>], d: usize, max_len: usize) -> BTreeSet<Vec<usize>> {
    let j = maps[0].len();
    let fbar = extended(maps, cocycle, d);
    let all = transversal_partitions(j, d);
    let mut persistent = all.clone();
    for r1 in &all {
        let mut reach = BTreeSet::from([r1.clone()]);
        let mut frontier = vec![r1.clone()];
        // the empty word is allowed: r1 reaches itself
        for _ in 0..max_len {
            let mut next = Vec::new();
            for r in &frontier {
                for f in &fbar {
                    let pulled = canonical(&f.iter().map(|&v| r[v]).collect::<Vec<_>>());
                    if reach.insert(pulled.clone()) {
                        next.push(pulled);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        persistent.retain(|r| reach.contains(r));
    }
    persistent
}

/// Set partitions of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let max = cur.iter().copied().max().map_or(0, |m| m + 1);
        for b in 0..=max {
            cur.push(b);
            rec(n, cur, out);
            cur.pop();
        }
    }
    rec(n, &mut cur, &mut out);
    out
}

/// `a` refines `b`.
pub fn refines(a: &[usize], b: &[usize]) -> bool {
    (0..a.len()).all(|x| (0..a.len()).all(|y| a[x] != a[y] || b[x] == b[y]))
}

/// Partitions of `J` that are forward congruences on whose blocks all
/// persistent partitions restrict to the same partition.
pub fn reducing_partitions(maps: &[Vec<usize>], persistent: &BTreeSet<Vec<usize>>, d: usize) -> Vec<Vec<usize>> {
    let j = maps[0].len();
    set_partitions(j)
        .into_iter()
        .filter(|xi| {
            maps.iter()
                .all(|f| (0..j).all(|x| (0..j).all(|y| xi[x] != xi[y] || xi[f[x]] == xi[f[y]])))
        })
        .filter(|xi| {
            let blocks = xi.iter().copied().max().unwrap_or(0) + 1;
            (0..blocks).all(|b| {
                let cells: Vec<usize> = (0..j * d).filter(|v| xi[v / d] == b).collect();
                let restricted: BTreeSet<Vec<usize>> = persistent
                    .iter()
                    .map(|r| canonical(&cells.iter().map(|&v| r[v]).collect::<Vec<_>>()))
                    .collect();
                restricted.len() <= 1
            })
        })
        .collect()
}

/// Does some `w : J → A_d` satisfy `a2(i,j)·w(j) = w(f_i j)·a1(i,j)`? Tries all of them.
pub fn brute_cohomologous(maps: &[Vec<usize>], a1: &[Vec<Vec<usize>>], a2: &[Vec<Vec<usize>>], d: usize) -> bool {
    let j = maps[0].len();
    all_functions(j, d).into_iter().any(|w| {
        maps.iter().enumerate().all(|(i, f)| {
            (0..j).all(|x| (0..d).all(|y| a2[i][x][w[x][y]] == w[f[x]][a1[i][x][y]]))
        })
    })
}

pub fn images(cocycle: &[Vec<Permutation>]) -> Vec<Vec<Vec<usize>>> {
    cocycle
        .iter()
        .map(|row| row.iter().map(|p| p.images().to_vec()).collect())
        .collect()
}

pub fn random_perm(rng: &mut impl Rng, d: usize) -> Permutation {
    let mut v: Vec<usize> = (0..d).collect();
    v.shuffle(rng);
    Permutation::from_images(v).unwrap()
}

pub fn random_cocycle(rng: &mut impl Rng, letters: usize, j: usize, d: usize) -> Vec<Vec<Permutation>> {
    (0..letters)
        .map(|_| (0..j).map(|_| random_perm(rng, d)).collect())
        .collect()
}

/// `a2(i,j) = w(f_i j)·a1(i,j)·w(j)⁻¹`.
pub fn twist(base: &LetterMaps, a1: &[Vec<Permutation>], w: &[Permutation]) -> Vec<Vec<Permutation>> {
    a1.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, a)| w[base.apply(i, j)].compose(a).compose(&w[j].inverse()))
                .collect()
        })
        .collect()
}

/// Random letter maps whose graph is irreducible.
pub fn random_irreducible_maps(rng: &mut impl Rng, rho: &Rho, n: usize) -> LetterMaps {
    loop {
        let maps: Vec<Vec<usize>> = (0..rho.len())
            .map(|_| (0..n).map(|_| rng.gen_range(0..n)).collect())
            .collect();
        let lm = LetterMaps::new(rho.clone(), (0..n).map(|k| format!("j{k}")).collect(), maps).unwrap();
        if lm.graph().is_ok_and(|(g, _)| g.is_irreducible()) {
            return lm;
        }
    }
}

/// A random irreducible ρ-uniform graph on `n` vertices.
pub fn random_uniform_graph(rng: &mut impl Rng, rho: &Rho, n: usize) -> StochasticGraph {
    random_irreducible_maps(rng, rho, n).graph().unwrap().0
}

/// A random vertex/edge reordering, returned as `(vertex_order, edge_order)`.
pub fn random_relabeling(rng: &mut impl Rng, g: &StochasticGraph) -> (Vec<usize>, Vec<usize>) {
    let mut v: Vec<usize> = (0..g.vertex_count()).collect();
    let mut e: Vec<usize> = (0..g.edge_count()).collect();
    v.shuffle(rng);
    e.shuffle(rng);
    (v, e)
}

/// A random valid stochastic graph (not necessarily ρ-uniform) with weights in `1/den` steps.
pub fn random_stochastic_graph(rng: &mut impl Rng, n: usize, max_out: usize, den: i64) -> StochasticGraph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            let k = rng.gen_range(1..=max_out.min(den as usize));
            // split den into k positive parts
            let mut cuts: Vec<i64> = (1..den).collect();
            cuts.shuffle(rng);
            let mut cuts: Vec<i64> = cuts.into_iter().take(k - 1).collect();
            cuts.sort();
            let mut prev = 0;
            for (m, c) in cuts.into_iter().chain([den]).enumerate() {
                let dst = rng.gen_range(0..n);
                edges.push(EdgeSpec::new(format!("e{u}_{m}"), u, dst, r(c - prev, den)));
                prev = c;
            }
        }
        if let Ok(g) = StochasticGraph::new(None, (0..n).map(|u| format!("v{u}")).collect(), edges) {
            return g;
        }
    }
}
