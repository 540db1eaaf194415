//! Permutations of the fiber `Y_d`.
//!
//! Points are stored 0-based internally; the text form is the 1-based
//! one-line notation `[y1 y2 ... yd]`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation {
            images: (0..d).collect(),
        }
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &y in &images {
            if y >= d || seen[y] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 0..{d}"
                )));
            }
            seen[y] = true;
        }
        Ok(Permutation { images })
    }

    /// The transposition of two points (0-based).
    pub fn transposition(d: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..d).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, y: usize) -> usize {
        self.images[y]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i == y)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (y, &z) in self.images.iter().enumerate() {
            images[z] = y;
        }
        Permutation { images }
    }

    /// `(self * other)(y) = self(other(y))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.degree(), other.degree(), "permutation degree mismatch");
        Permutation {
            images: other.images.iter().map(|&y| self.images[y]).collect(),
        }
    }

    /// All `d!` permutations in lexicographic order of their image vectors.
    pub fn all(d: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..d).collect();
        loop {
            out.push(Permutation {
                images: cur.clone(),
            });
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, y) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", y + 1)?;
        }
        write!(f, "]")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidPermutation(format!("`{s}` is not of the form [y1 ... yd]")))?;
        let images = inner
            .split_whitespace()
            .map(|tok| match tok.parse::<usize>() {
                Ok(y) if y >= 1 => Ok(y - 1),
                _ => Err(Error::InvalidPermutation(format!("bad point `{tok}` in `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if images.is_empty() {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        Permutation::from_images(images)
    }
}

/// Advances `v` to the next permutation in lexicographic order; false at the last one.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_first() {
        let a = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let b = Permutation::transposition(3, 0, 1);
        let ab = &a * &b;
        for y in 0..3 {
            assert_eq!(ab.apply(y), a.apply(b.apply(y)));
        }
    }

    #[test]
    fn inverse_cancels() {
        for p in Permutation::all(4) {
            assert!((&p * &p.inverse()).is_identity());
            assert!((&p.inverse() * &p).is_identity());
        }
    }

    #[test]
    fn all_is_lexicographic_and_complete() {
        let all = Permutation::all(3);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all[0].is_identity());
        assert_eq!(Permutation::all(1).len(), 1);
    }

    #[test]
    fn one_line_notation_round_trips() {
        let p: Permutation = "[2 3 1]".parse().unwrap();
        assert_eq!(p.images(), &[1, 2, 0]);
        assert_eq!(p.to_string(), "[2 3 1]");
        assert!("[1 1]".parse::<Permutation>().is_err());
        assert!("[0 1]".parse::<Permutation>().is_err());
        assert!("1 2".parse::<Permutation>().is_err());
    }
}
