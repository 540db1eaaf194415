//! Degree of a letter-map semigroup via the subset-image (power automaton) graph.
//!
//! For a finite vertex set `U` the degree is `min |f_w(U)|` over all words,
//! and the persistent sets are exactly the images `f_w(U)` of that minimal
//! size.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::homo::{GraphHom, LetterMaps, Word};

pub const DEFAULT_SUBSET_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionReport {
    pub degree: usize,
    /// A word whose image of `U` has `degree` elements.
    pub witness: Word,
    /// Sorted vertex lists, in lexicographic order.
    pub persistent_sets: Vec<Vec<usize>>,
    /// False when the subset budget cut the search; `degree` is then an upper bound.
    pub exhausted: bool,
}

/// Three-valued answer of [`is_d_contractive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contractivity {
    Yes,
    No,
    Indeterminate,
}

struct Node {
    set: Vec<usize>,
    parent: Option<(usize, usize)>,
}

/// Subset-image search from `U`, expanding smaller images first (ties by discovery order).
pub fn degree(lm: &LetterMaps, budget: usize) -> ContractionReport {
    let n = lm.vertex_count();
    let full: Vec<usize> = (0..n).collect();
    let mut nodes = vec![Node {
        set: full.clone(),
        parent: None,
    }];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(full, 0)]);
    let mut heap = BinaryHeap::from([Reverse((n, 0usize))]);
    let mut exhausted = true;
    let mut best = 0usize;

    while let Some(Reverse((size, id))) = heap.pop() {
        if size < nodes[best].set.len() {
            best = id;
        }
        if size == 1 {
            // nothing can shrink further; the closure pass below collects the rest
            break;
        }
        for i in 0..lm.letter_count() {
            let image = lm.image(i, &nodes[id].set);
            if index.contains_key(&image) {
                continue;
            }
            if nodes.len() >= budget {
                exhausted = false;
                break;
            }
            let k = nodes.len();
            index.insert(image.clone(), k);
            heap.push(Reverse((image.len(), k)));
            nodes.push(Node {
                set: image,
                parent: Some((id, i)),
            });
        }
        if !exhausted {
            break;
        }
    }
    // Pick up anything smaller that was discovered but not yet popped.
    for (k, node) in nodes.iter().enumerate() {
        if node.set.len() < nodes[best].set.len() {
            best = k;
        }
    }

    let d = nodes[best].set.len();
    let mut witness = Vec::new();
    let mut cur = best;
    while let Some((parent, letter)) = nodes[cur].parent {
        // the last letter applied is the leftmost
        witness.push(letter);
        cur = parent;
    }
    let witness = Word::new(witness);

    let mut persistent: Vec<Vec<usize>> = nodes.iter().filter(|n| n.set.len() == d).map(|n| n.set.clone()).collect();
    let mut seen: std::collections::HashSet<Vec<usize>> = persistent.iter().cloned().collect();
    let mut queue: VecDeque<Vec<usize>> = persistent.iter().cloned().collect();
    while let Some(set) = queue.pop_front() {
        for i in 0..lm.letter_count() {
            let image = lm.image(i, &set);
            if image.len() == d && seen.insert(image.clone()) {
                if seen.len() > budget {
                    exhausted = false;
                    break;
                }
                persistent.push(image.clone());
                queue.push_back(image);
            }
        }
    }
    persistent.sort();

    ContractionReport {
        degree: d,
        witness,
        persistent_sets: persistent,
        exhausted,
    }
}

pub fn is_d_contractive(lm: &LetterMaps, d: usize, budget: usize) -> Contractivity {
    let report = degree(lm, budget);
    match (report.exhausted, report.degree == d) {
        (true, true) => Contractivity::Yes,
        (true, false) => Contractivity::No,
        // a truncated run only bounds the degree from above
        (false, _) if report.degree < d => Contractivity::No,
        (false, _) => Contractivity::Indeterminate,
    }
}

/// Shortest word merging two points, by BFS over unordered pairs (backwards from the diagonal).
fn merging_word(lm: &LetterMaps, a: usize, b: usize) -> Option<Word> {
    let n = lm.vertex_count();
    let key = |x: usize, y: usize| if x < y { x * n + y } else { y * n + x };
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([key(a, b)]);
    parent.insert(key(a, b), (usize::MAX, usize::MAX));
    while let Some(p) = queue.pop_front() {
        let (x, y) = (p / n, p % n);
        for i in 0..lm.letter_count() {
            let (fx, fy) = (lm.apply(i, x), lm.apply(i, y));
            if fx == fy {
                let mut letters = vec![i];
                let mut cur = p;
                while let Some(&(prev, letter)) = parent.get(&cur) {
                    if prev == usize::MAX {
                        break;
                    }
                    letters.push(letter);
                    cur = prev;
                }
                return Some(Word::new(letters));
            }
            let q = key(fx, fy);
            if let std::collections::hash_map::Entry::Vacant(slot) = parent.entry(q) {
                slot.insert((p, i));
                queue.push_back(q);
            }
        }
    }
    None
}

/// A word `w` with `|f_w(U)| = 1`, built by repeatedly merging a pair of the current image.
pub fn synchronizing_word(lm: &LetterMaps) -> Option<Word> {
    let mut image: Vec<usize> = (0..lm.vertex_count()).collect();
    let mut word = Word::empty();
    while image.len() > 1 {
        let mut merged = None;
        'pairs: for x in 0..image.len() {
            for y in x + 1..image.len() {
                if let Some(w) = merging_word(lm, image[x], image[y]) {
                    merged = Some(w);
                    break 'pairs;
                }
            }
        }
        let w = merged?;
        let mut next: Vec<usize> = image.iter().map(|&u| lm.apply_word(&w, u)).collect();
        next.sort_unstable();
        next.dedup();
        image = next;
        word = w.concat(&word);
    }
    Some(word)
}

/// Degree of `alpha : A → B`, as `d(chi∘alpha) / d(chi)` for a coloring `chi` of `B`.
pub fn hom_degree(alpha: &GraphHom, chi: &GraphHom, budget: usize) -> Result<usize> {
    let composite = alpha.then(chi)?;
    let top = degree(&LetterMaps::from_coloring(&composite)?, budget);
    let bottom = degree(&LetterMaps::from_coloring(chi)?, budget);
    if !top.exhausted || !bottom.exhausted {
        return Err(Error::BudgetExceeded {
            what: "subset",
            limit: budget,
        });
    }
    if !top.degree.is_multiple_of(bottom.degree) {
        return Err(Error::Invariant(format!(
            "degree {} is not a multiple of {}",
            top.degree, bottom.degree
        )));
    }
    Ok(top.degree / bottom.degree)
}
