use std::collections::VecDeque;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{EdgeSpec, Path, Rational, Rho, StochasticGraph};
use crate::error::{Error, Result};

/// A first-return path at a vertex together with its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnWord {
    pub path: Path,
    pub weight: Rational,
}

/// `G^(n)` together with, for every edge, the underlying `n`-path of `G`.
#[derive(Debug, Clone)]
pub struct StringedGraph {
    pub graph: StochasticGraph,
    pub n: usize,
    /// `paths[e]` is the backward path `g1 ... gn` of the edge `e` of `G^(n)`.
    pub paths: Vec<Vec<usize>>,
}

impl StringedGraph {
    /// `pi^(n)`: the first edge `g1` of each `n`-path.
    pub fn projection_edge_map(&self) -> Vec<usize> {
        self.paths.iter().map(|p| p[0]).collect()
    }
}

impl StochasticGraph {
    fn reachable(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            let next: Box<dyn Iterator<Item = usize>> = if forward {
                Box::new(self.out_edges(u).iter().map(|&e| self.edge(e).dst))
            } else {
                Box::new(self.in_edges(u).iter().map(|&e| self.edge(e).src))
            };
            for v in next {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Strong connectivity of the underlying directed graph.
    pub fn is_irreducible(&self) -> bool {
        self.reachable(0, true).into_iter().all(|b| b) && self.reachable(0, false).into_iter().all(|b| b)
    }

    /// The gcd of the lengths of all cycles.
    pub fn period(&self) -> Result<usize> {
        if !self.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let mut level = vec![usize::MAX; self.vertex_count()];
        level[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &e in self.out_edges(u) {
                let v = self.edge(e).dst;
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut gcd = 0usize;
        for e in self.edges() {
            let diff = (level[e.src] as i64 + 1 - level[e.dst] as i64).unsigned_abs() as usize;
            gcd = gcd.gcd(&diff);
        }
        Ok(gcd)
    }

    /// Exact solution of the balance equations `sum_{g in _vG} p(g) p0(s(g)) = p0(v)`, `sum p0 = 1`.
    ///
    /// Gaussian elimination over the rationals on the augmented system with
    /// one balance row per vertex plus the normalization row; the pivot is
    /// the first nonzero entry in column order.
    pub fn stationary_distribution(&self) -> Result<Vec<Rational>> {
        if !self.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let n = self.vertex_count();
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n + 1);
        for v in 0..n {
            let mut row = vec![Rational::zero(); n + 1];
            for &e in self.in_edges(v) {
                let edge = self.edge(e);
                row[edge.src] += &edge.weight;
            }
            row[v] -= Rational::one();
            rows.push(row);
        }
        let mut norm = vec![Rational::one(); n + 1];
        norm[n] = Rational::one();
        rows.push(norm);

        let mut pivot_row = 0;
        for col in 0..n {
            let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                return Err(Error::NotIrreducible);
            };
            rows.swap(pivot_row, p);
            let inv = rows[pivot_row][col].recip();
            for x in rows[pivot_row].iter_mut() {
                *x *= &inv;
            }
            let pivot = rows[pivot_row].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != pivot_row && !row[col].is_zero() {
                    let factor = row[col].clone();
                    for (x, px) in row.iter_mut().zip(&pivot) {
                        *x -= &factor * px;
                    }
                }
            }
            pivot_row += 1;
        }
        if rows[n..].iter().any(|row| !row[n].is_zero()) {
            return Err(Error::Invariant("inconsistent balance equations".into()));
        }
        Ok(rows[..n].iter().map(|row| row[n].clone()).collect())
    }

    /// True iff every `G_u` carries exactly the weight multiset of `rho`.
    pub fn is_rho_uniform(&self, rho: &Rho) -> bool {
        let mut expected = rho.weights().to_vec();
        expected.sort();
        (0..self.vertex_count()).all(|u| {
            let mut got: Vec<Rational> = self.out_edges(u).iter().map(|&e| self.edge(e).weight.clone()).collect();
            got.sort();
            got == expected
        })
    }

    /// All backward `n`-paths `g1 ... gn`, grouped by `gn` in edge order.
    pub fn paths_of_length(&self, n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return Vec::new();
        }
        // Grow from the first-traversed edge gn backwards to g1.
        let mut acc: Vec<Vec<usize>> = (0..self.edge_count()).map(|e| vec![e]).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for p in &acc {
                let head = self.edge(p[0]).dst;
                for &e in self.out_edges(head) {
                    let mut q = Vec::with_capacity(p.len() + 1);
                    q.push(e);
                    q.extend_from_slice(p);
                    next.push(q);
                }
            }
            acc = next;
        }
        acc
    }

    /// The `n`-stringing `G^(n)`: edges are `n`-paths, `s = g2...gn`,
    /// `t = g1...g(n-1)`, weight `p(g1)`.
    pub fn stringing(&self, n: usize) -> Result<StringedGraph> {
        if n == 0 {
            return Err(Error::Precondition("stringing order must be at least 1".into()));
        }
        if n == 1 {
            return Ok(StringedGraph {
                graph: self.clone(),
                n,
                paths: (0..self.edge_count()).map(|e| vec![e]).collect(),
            });
        }
        let vertex_paths = self.paths_of_length(n - 1);
        let index: std::collections::HashMap<&[usize], usize> = vertex_paths
            .iter()
            .enumerate()
            .map(|(k, p)| (p.as_slice(), k))
            .collect();
        let join = |p: &[usize]| {
            p.iter()
                .map(|&e| self.edge(e).id.as_str())
                .collect::<Vec<_>>()
                .join(".")
        };
        let vertices: Vec<String> = vertex_paths.iter().map(|p| join(p)).collect();
        let paths = self.paths_of_length(n);
        let edges = paths
            .iter()
            .map(|p| {
                let src = index[&p[1..]];
                let dst = index[&p[..n - 1]];
                EdgeSpec::new(join(p), src, dst, self.edge(p[0]).weight.clone())
            })
            .collect();
        let name = self.name().map(|s| format!("{s}^({n})"));
        Ok(StringedGraph {
            graph: StochasticGraph::new(name, vertices, edges)?,
            n,
            paths,
        })
    }

    /// Markov measure of the cylinder `[g1 ... gn]`: `p(g1)...p(gn) p0(s(gn))`.
    pub fn cylinder_measure(&self, path: &Path) -> Result<Rational> {
        let stationary = self.stationary_distribution()?;
        Ok(self.cylinder_measure_with(&stationary, path))
    }

    pub(crate) fn cylinder_measure_with(&self, stationary: &[Rational], path: &Path) -> Rational {
        path.weight(self) * &stationary[path.start(self)]
    }

    /// First-return paths at `u` of length at most `max_len`, shortest first.
    pub fn return_words(&self, u: usize, max_len: usize) -> Result<Vec<ReturnWord>> {
        if u >= self.vertex_count() {
            return Err(Error::UnknownVertex(u.to_string()));
        }
        let mut out = Vec::new();
        // Partial walks in traversal order that left u and have not come back.
        let mut frontier: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), Rational::one())];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (walk, weight) in &frontier {
                let at = walk.last().map_or(u, |&e| self.edge(e).dst);
                for &e in self.out_edges(at) {
                    let w = weight * &self.edge(e).weight;
                    let mut walk = walk.clone();
                    walk.push(e);
                    if self.edge(e).dst == u {
                        let path = Path::from_traversal(self, walk)?;
                        out.push(ReturnWord { path, weight: w });
                    } else {
                        next.push((walk, w));
                    }
                }
            }
            frontier = next;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn irreducibility() {
        assert!(fixtures::bernoulli_graph_pq(r(1, 3)).is_irreducible());
        assert!(fixtures::drunkard_ruin(3, r(1, 3)).graph.is_irreducible());
        assert!(!fixtures::disjoint_loops().is_irreducible());
    }

    #[test]
    fn periods() {
        assert_eq!(fixtures::drunkard_ruin(3, r(1, 3)).graph.period().unwrap(), 1);
        assert_eq!(fixtures::two_cycle().period().unwrap(), 2);
        assert_eq!(fixtures::disjoint_loops().period(), Err(Error::NotIrreducible));
    }

    #[test]
    fn drunkard_stationary_distribution() {
        let g = fixtures::drunkard_ruin(3, r(1, 3)).graph;
        assert_eq!(g.stationary_distribution().unwrap(), vec![r(4, 7), r(2, 7), r(1, 7)]);
        assert_eq!(fixtures::two_cycle().stationary_distribution().unwrap(), vec![r(1, 2), r(1, 2)]);
        assert_eq!(
            fixtures::disjoint_loops().stationary_distribution(),
            Err(Error::NotIrreducible)
        );
    }

    #[test]
    fn rho_uniformity() {
        let fdr = fixtures::drunkard_ruin(3, r(1, 3));
        assert!(fdr.graph.is_rho_uniform(&fdr.rho));
        assert!(!fdr.graph.is_rho_uniform(&Rho::from_weights(vec![r(1, 2), r(1, 2)]).unwrap()));
        let three = Rho::from_weights(vec![r(1, 3), r(1, 3), r(1, 3)]).unwrap();
        assert!(!fdr.graph.is_rho_uniform(&three));
    }

    #[test]
    fn stringing_counts() {
        let b = fixtures::bernoulli_graph_pq(r(1, 3));
        let s1 = b.stringing(1).unwrap().graph;
        assert_eq!((s1.vertex_count(), s1.edge_count()), (1, 2));
        let s2 = b.stringing(2).unwrap().graph;
        assert_eq!((s2.vertex_count(), s2.edge_count()), (2, 4));

        let fdr = fixtures::drunkard_ruin(2, r(1, 3)).graph;
        let expected: usize = (0..fdr.vertex_count())
            .map(|u| fdr.in_edges(u).len() * fdr.out_edges(u).len())
            .sum();
        assert_eq!(fdr.stringing(2).unwrap().graph.edge_count(), expected);
        assert!(b.stringing(0).is_err());
    }

    #[test]
    fn cylinder_measures() {
        let b = fixtures::bernoulli_graph_pq(r(1, 3));
        let one = b.edge_id("1").unwrap();
        assert_eq!(b.cylinder_measure(&Path::new(&b, vec![one]).unwrap()).unwrap(), r(1, 3));

        let fdr = fixtures::drunkard_ruin(3, r(1, 3)).graph;
        let loop_at_1 = fdr.edge_id("0:1").unwrap();
        let p = Path::new(&fdr, vec![loop_at_1, loop_at_1]).unwrap();
        assert_eq!(fdr.cylinder_measure(&p).unwrap(), r(16, 63));
    }

    #[test]
    fn return_words_small_cases() {
        let b = fixtures::bernoulli_graph_pq(r(1, 3));
        let rw = b.return_words(0, 1).unwrap();
        assert_eq!(rw.len(), 2);
        assert_eq!(rw.iter().map(|w| w.weight.clone()).sum::<Rational>(), r(1, 1));
        assert!(b.return_words(0, 0).unwrap().is_empty());
        assert!(b.return_words(5, 1).is_err());

        // n = 2: q-loop at 1, and 1 -p-> 2 -q-> 1.
        let fdr = fixtures::drunkard_ruin(2, r(1, 3)).graph;
        let rw = fdr.return_words(0, 2).unwrap();
        let shown: Vec<(String, Rational)> = rw
            .iter()
            .map(|w| (w.path.display(&fdr).to_string(), w.weight.clone()))
            .collect();
        assert_eq!(
            shown,
            vec![("0:1".to_string(), r(2, 3)), ("0:2 1:1".to_string(), r(2, 9))]
        );
    }
}
