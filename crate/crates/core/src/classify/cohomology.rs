//! Solving `a₂(h)·w(s(h)) = w(t(h))·a₁(h)` and comparing extensions.

use std::collections::VecDeque;

use crate::extension::GspExtension;
use crate::homo::LetterMaps;
use crate::perm::Permutation;

/// Undirected adjacency of the base `I × J`: `(neighbor, letter, forward)`.
fn adjacency(base: &LetterMaps) -> Vec<Vec<(usize, usize, bool)>> {
    let mut adj = vec![Vec::new(); base.vertex_count()];
    for i in 0..base.letter_count() {
        for j in 0..base.vertex_count() {
            let t = base.apply(i, j);
            adj[j].push((t, i, true));
            adj[t].push((j, i, false));
        }
    }
    adj
}

/// True when `w` solves the cocycle equation on every edge `(i, j)`.
pub fn solves_cohomology(base: &LetterMaps, a1: &[Vec<Permutation>], a2: &[Vec<Permutation>], w: &[Permutation]) -> bool {
    (0..base.letter_count()).all(|i| {
        (0..base.vertex_count()).all(|j| &a2[i][j] * &w[j] == &w[base.apply(i, j)] * &a1[i][j])
    })
}

/// A `w : J → A_d` with `a₂(i, j)·w(j) = w(f_i j)·a₁(i, j)`, if one exists.
///
/// Each connected component is solved from its smallest vertex, trying root
/// values in lexicographic order and propagating along edges both ways.
pub fn cohomologous(base: &LetterMaps, a1: &[Vec<Permutation>], a2: &[Vec<Permutation>], d: usize) -> Option<Vec<Permutation>> {
    let n = base.vertex_count();
    let adj = adjacency(base);
    let mut component = vec![usize::MAX; n];
    let mut w: Vec<Option<Permutation>> = vec![None; n];
    for root in 0..n {
        if component[root] != usize::MAX {
            continue;
        }
        let mut members = vec![root];
        component[root] = root;
        let mut k = 0;
        while k < members.len() {
            for &(v, _, _) in &adj[members[k]] {
                if component[v] == usize::MAX {
                    component[v] = root;
                    members.push(v);
                }
            }
            k += 1;
        }
        let mut solved = false;
        for value in Permutation::all(d) {
            if let Some(sol) = propagate(base, &adj, a1, a2, root, value, &members) {
                for (j, p) in sol {
                    w[j] = Some(p);
                }
                solved = true;
                break;
            }
        }
        if !solved {
            return None;
        }
    }
    Some(w.into_iter().map(|p| p.expect("every vertex is in a component")).collect())
}

fn propagate(
    base: &LetterMaps,
    adj: &[Vec<(usize, usize, bool)>],
    a1: &[Vec<Permutation>],
    a2: &[Vec<Permutation>],
    root: usize,
    value: Permutation,
    members: &[usize],
) -> Option<Vec<(usize, Permutation)>> {
    let mut w: Vec<Option<Permutation>> = vec![None; base.vertex_count()];
    w[root] = Some(value);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let wu = w[u].clone().expect("queued vertices are assigned");
        for &(v, i, forward) in &adj[u] {
            let wv = if forward {
                // w(f_i u) = a₂(i,u)·w(u)·a₁(i,u)⁻¹
                &(&a2[i][u] * &wu) * &a1[i][u].inverse()
            } else {
                // u = f_i v: w(v) = a₂(i,v)⁻¹·w(u)·a₁(i,v)
                &(&a2[i][v].inverse() * &wu) * &a1[i][v]
            };
            match &w[v] {
                Some(existing) if *existing != wv => return None,
                Some(_) => {}
                None => {
                    w[v] = Some(wv);
                    queue.push_back(v);
                }
            }
        }
    }
    Some(members.iter().map(|&j| (j, w[j].clone().expect("connected"))).collect())
}

/// A base isomorphism `κ` with `κ∘f¹_i = f²_i∘κ` and a relabeling `w` with
/// `a₂(i, κ j)·w(j) = w(f¹_i j)·a₁(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence {
    pub kappa: Vec<usize>,
    pub w: Vec<Permutation>,
}

/// Per-vertex invariants used to prune `κ` candidates.
fn signatures(base: &LetterMaps) -> Vec<Vec<(usize, bool)>> {
    let n = base.vertex_count();
    let mut sig = vec![Vec::with_capacity(base.letter_count()); n];
    for i in 0..base.letter_count() {
        let mut indeg = vec![0usize; n];
        for j in 0..n {
            indeg[base.apply(i, j)] += 1;
        }
        for j in 0..n {
            sig[j].push((indeg[j], base.apply(i, j) == j));
        }
    }
    sig
}

/// All letter-map conjugacies `J₁ → J₂`, in lexicographic order of the image vectors.
pub fn base_isomorphisms(b1: &LetterMaps, b2: &LetterMaps) -> Vec<Vec<usize>> {
    let n = b1.vertex_count();
    if n != b2.vertex_count() || b1.rho() != b2.rho() {
        return Vec::new();
    }
    let (s1, s2) = (signatures(b1), signatures(b2));
    let mut out = Vec::new();
    let mut kappa = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search(b1, b2, &s1, &s2, &mut kappa, &mut used, &mut out);
    out
}

fn search(
    b1: &LetterMaps,
    b2: &LetterMaps,
    s1: &[Vec<(usize, bool)>],
    s2: &[Vec<(usize, bool)>],
    kappa: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(u) = kappa.iter().position(|&k| k == usize::MAX) else {
        out.push(kappa.clone());
        return;
    };
    for v in 0..b2.vertex_count() {
        if used[v] || s1[u] != s2[v] {
            continue;
        }
        // assign u ↦ v and close forward; undo on conflict
        let mut assigned = Vec::new();
        let mut stack = vec![(u, v)];
        let mut ok = true;
        while let Some((x, y)) = stack.pop() {
            if kappa[x] != usize::MAX {
                if kappa[x] != y {
                    ok = false;
                    break;
                }
                continue;
            }
            if used[y] || s1[x] != s2[y] {
                ok = false;
                break;
            }
            kappa[x] = y;
            used[y] = true;
            assigned.push(x);
            for i in 0..b1.letter_count() {
                stack.push((b1.apply(i, x), b2.apply(i, y)));
            }
        }
        if ok {
            search(b1, b2, s1, s2, kappa, used, out);
        }
        for x in assigned {
            used[kappa[x]] = false;
            kappa[x] = usize::MAX;
        }
    }
}

/// First `(κ, w)` making `e1` and `e2` equivalent, if any.
pub fn extensions_equivalent(e1: &GspExtension, e2: &GspExtension) -> Option<Equivalence> {
    if e1.rho() != e2.rho() || e1.d() != e2.d() {
        return None;
    }
    for kappa in base_isomorphisms(e1.base(), e2.base()) {
        let pulled: Vec<Vec<Permutation>> = (0..e1.rho().len())
            .map(|i| kappa.iter().map(|&k| e2.cocycle(i, k).clone()).collect())
            .collect();
        if let Some(w) = cohomologous(e1.base(), e1.cocycles(), &pulled, e1.d()) {
            return Some(Equivalence { kappa, w });
        }
    }
    None
}

/// Independent re-check of an equivalence certificate.
pub fn verify_equivalence(e1: &GspExtension, e2: &GspExtension, eq: &Equivalence) -> bool {
    let n = e1.j_count();
    if e1.rho() != e2.rho() || e1.d() != e2.d() || n != e2.j_count() || eq.kappa.len() != n || eq.w.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &k in &eq.kappa {
        if k >= n || std::mem::replace(&mut hit[k], true) {
            return false;
        }
    }
    if eq.w.iter().any(|p| p.degree() != e1.d()) {
        return false;
    }
    (0..e1.rho().len()).all(|i| {
        (0..n).all(|j| {
            let fj = e1.base().apply(i, j);
            eq.kappa[fj] == e2.base().apply(i, eq.kappa[j])
                && e2.cocycle(i, eq.kappa[j]) * &eq.w[j] == &eq.w[fj] * e1.cocycle(i, j)
        })
    })
}
