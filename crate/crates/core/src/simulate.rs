//! Monte-Carlo sampling of the edge chain, for cross-checking exact results.
//!
//! Randomness is SplitMix64 (`z = (s += 0x9e3779b97f4a7c15)`, then two
//! xor-shift-multiply rounds). A weight table with cumulative sums `c_k` is
//! sampled by drawing `x` uniform on `[0, 2^64)` and taking the first `k` with
//! `x < ceil(c_k · 2^64)`; the bias per draw is below `2^-64` per outcome.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::extension::GspExtension;
use crate::graph::{Path, Rational, Rho, StochasticGraph};
use crate::homo::LetterMaps;

/// A sampled trajectory; `traversal[0]` is the first edge traversed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectorySample {
    pub seed: u64,
    pub start: usize,
    pub traversal: Vec<usize>,
}

impl TrajectorySample {
    pub fn len(&self) -> usize {
        self.traversal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traversal.is_empty()
    }

    /// Source vertex of every step.
    pub fn occupation(&self, g: &StochasticGraph) -> Vec<usize> {
        let mut counts = vec![0; g.vertex_count()];
        for &e in &self.traversal {
            counts[g.edge(e).src] += 1;
        }
        counts
    }

    /// The whole trajectory as a backward-convention path.
    pub fn path(&self, g: &StochasticGraph) -> Result<Path> {
        Path::from_traversal(g, self.traversal.clone())
    }
}

/// `ceil(c · 2^64)` for each cumulative sum `c`, the last forced to `2^64`.
fn thresholds(weights: &[Rational]) -> Vec<u128> {
    let scale: BigInt = BigInt::one() << 64usize;
    let mut cum = Rational::zero();
    let mut out = Vec::with_capacity(weights.len());
    for w in weights {
        cum += w;
        let scaled = &cum * Rational::from_integer(scale.clone());
        let (q, r) = scaled.numer().div_rem(scaled.denom());
        let c = if r.is_zero() { q } else { q + 1 };
        out.push(c.to_u128().expect("at most 2^64"));
    }
    if let Some(last) = out.last_mut() {
        *last = 1u128 << 64;
    }
    out
}

fn draw(rng: &mut SplitMix64, table: &[u128]) -> usize {
    let x = rng.next_u64() as u128;
    table.iter().position(|&t| x < t).unwrap_or(table.len() - 1)
}

/// `length` steps of the chain started from the exact stationary distribution.
pub fn sample(g: &StochasticGraph, seed: u64, length: usize) -> Result<TrajectorySample> {
    let stationary = g.stationary_distribution()?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let start = draw(&mut rng, &thresholds(&stationary));
    let tables: Vec<Vec<u128>> = (0..g.vertex_count())
        .map(|u| {
            let w: Vec<Rational> = g.out_edges(u).iter().map(|&e| g.edge(e).weight.clone()).collect();
            thresholds(&w)
        })
        .collect();
    let mut traversal = Vec::with_capacity(length);
    let mut u = start;
    for _ in 0..length {
        let e = g.out_edges(u)[draw(&mut rng, &tables[u])];
        traversal.push(e);
        u = g.edge(e).dst;
    }
    Ok(TrajectorySample { seed, start, traversal })
}

/// I.i.d. letters with law `rho` — the letter process of any ρ-uniform chain.
pub fn sample_letters(rho: &Rho, seed: u64, length: usize) -> Vec<usize> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let table = thresholds(rho.weights());
    (0..length).map(|_| draw(&mut rng, &table)).collect()
}

/// Sliding-window count of the cylinder `[g1 … gn]` and the number of windows.
pub fn empirical_cylinder(sample: &TrajectorySample, path: &Path) -> (usize, usize) {
    let pattern: Vec<usize> = path.traversal().collect();
    let n = pattern.len();
    if sample.len() < n {
        return (0, 0);
    }
    let windows = sample.len() - n + 1;
    let hits = sample.traversal.windows(n).filter(|w| *w == pattern.as_slice()).count();
    (hits, windows)
}

/// Pattern given as raw edges in traversal order; incompatible patterns simply never match.
pub fn empirical_pattern(sample: &TrajectorySample, pattern: &[usize]) -> (usize, usize) {
    let n = pattern.len();
    if n == 0 || sample.len() < n {
        return (0, 0);
    }
    let hits = sample.traversal.windows(n).filter(|w| *w == pattern).count();
    (hits, sample.len() - n + 1)
}

/// `|f̄_{letters}(J × Y_d)|`, applying the letters in order.
pub fn empirical_fiber_collapse(e: &GspExtension, letters: &[usize]) -> usize {
    collapse(&e.extended_letter_maps(), letters)
}

/// Image size of the whole vertex set under a letter stream.
pub fn collapse(lm: &LetterMaps, letters: &[usize]) -> usize {
    let mut set: Vec<usize> = (0..lm.vertex_count()).collect();
    for &i in letters {
        set = lm.image(i, &set);
    }
    set.len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairObservation {
    pub pairs: BTreeSet<(usize, usize)>,
    /// Letters consumed before both automata were synchronized.
    pub burn_in: Option<usize>,
}

/// Runs both automata on one letter stream; records pairs once both are synchronized.
pub fn empirical_pair_positivity(b1: &LetterMaps, b2: &LetterMaps, letters: &[usize]) -> Result<PairObservation> {
    if b1.rho() != b2.rho() {
        return Err(Error::Precondition("bases are over different alphabets".into()));
    }
    let mut s1: Vec<usize> = (0..b1.vertex_count()).collect();
    let mut s2: Vec<usize> = (0..b2.vertex_count()).collect();
    let mut pairs = BTreeSet::new();
    let mut burn_in = None;
    for (t, &i) in letters.iter().enumerate() {
        s1 = b1.image(i, &s1);
        s2 = b2.image(i, &s2);
        if s1.len() == 1 && s2.len() == 1 {
            burn_in.get_or_insert(t + 1);
            pairs.insert((s1[0], s2[0]));
        }
    }
    Ok(PairObservation { pairs, burn_in })
}

/// `|count - n·p| ≤ k·sqrt(n·v)` where `v` is the per-step variance.
pub fn within_sigma(count: usize, n: usize, p: &Rational, variance: &Rational, k: f64) -> bool {
    let (p, v) = (p.to_f64().expect("finite"), variance.to_f64().expect("finite"));
    let n = n as f64;
    (count as f64 - n * p).abs() <= k * (n * v).sqrt()
}

/// `p(1-p)`: the variance of one independent indicator.
pub fn binomial_variance(p: &Rational) -> Rational {
    p * (Rational::one() - p)
}

/// Asymptotic variance `lim Var(N_u)/n` of the time spent at `u` by the vertex chain.
///
/// With `Z = (I - P + 1π)⁻¹` this is `2π_u Z_uu - π_u - π_u²`; it reduces to
/// the binomial variance when successive steps are independent.
pub fn chain_variance(g: &StochasticGraph, u: usize) -> Result<Rational> {
    let pi = g.stationary_distribution()?;
    let n = g.vertex_count();
    // column u of Z solves (I - P + 1π) z = e_u
    let mut a = vec![vec![Rational::zero(); n + 1]; n];
    for (x, row) in a.iter_mut().enumerate() {
        row[x] += Rational::one();
        for y in 0..n {
            row[y] += &pi[y];
        }
        row[n] = if x == u { Rational::one() } else { Rational::zero() };
    }
    for e in g.edges() {
        a[e.src][e.dst] -= &e.weight;
    }
    let z = solve(a).ok_or_else(|| Error::Invariant("fundamental matrix is singular".into()))?;
    let two = Rational::from_integer(2.into());
    Ok(&two * &pi[u] * &z[u] - &pi[u] - &pi[u] * &pi[u])
}

/// Asymptotic variance of the sliding-window count of an edge pattern (traversal order).
pub fn pattern_variance(g: &StochasticGraph, pattern: &[usize]) -> Result<Rational> {
    // windows of length n are the vertices of the (n+1)-stringing
    let s = g.stringing(pattern.len() + 1)?;
    let name = pattern
        .iter()
        .rev()
        .map(|&e| g.edge(e).id.as_str())
        .collect::<Vec<_>>()
        .join(".");
    match s.graph.vertex_id(&name) {
        Some(v) => chain_variance(&s.graph, v),
        None => Ok(Rational::zero()),
    }
}

/// Gauss–Jordan elimination on an augmented `n × (n+1)` matrix.
fn solve(mut a: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}
