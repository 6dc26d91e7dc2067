//! Finite complete lattices over dense element indices.
//!
//! A [`FiniteLattice`] stores the reflexive-transitive order relation together
//! with precomputed meet and join tables. Every finite nonempty lattice is
//! complete, so arbitrary meets and joins reduce to folds over the binary
//! tables with `top` and `bottom` as the empty-family values.

pub mod gallery;
mod morphism;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

pub use morphism::{automorphisms, find_isomorphism, LatticeMap, MapKind};

/// Which binary bound failed to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Meet,
    Join,
}

impl core::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BoundKind::Meet => f.write_str("greatest lower bound"),
            BoundKind::Join => f.write_str("least upper bound"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice must have at least one element")]
    Empty,
    #[error("element index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("order relation is not a partial order: {a} and {b} lie on a cycle")]
    NotAPartialOrder { a: usize, b: usize },
    #[error("not a lattice: elements {a} and {b} have no unique {kind}")]
    NotALattice { a: usize, b: usize, kind: BoundKind },
    #[error("empty interval: {lo} is not below {hi}")]
    EmptyInterval { lo: usize, hi: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// A finite (hence complete) lattice on elements `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    size: usize,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
    atoms: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteLattice {
    /// Builds a lattice from generating order pairs `(a, b)` meaning `a <= b`.
    ///
    /// The reflexive-transitive closure of the pairs is taken first; the result
    /// must be antisymmetric and every pair of elements must have a unique
    /// greatest lower bound and least upper bound.
    pub fn from_order(size: usize, pairs: &[(usize, usize)]) -> Result<Self, LatticeError> {
        if size == 0 {
            return Err(LatticeError::Empty);
        }
        let mut leq = vec![false; size * size];
        for i in 0..size {
            leq[i * size + i] = true;
        }
        for &(a, b) in pairs {
            for index in [a, b] {
                if index >= size {
                    return Err(LatticeError::IndexOutOfRange { index, size });
                }
            }
            leq[a * size + b] = true;
        }
        // Warshall closure.
        for k in 0..size {
            for i in 0..size {
                if !leq[i * size + k] {
                    continue;
                }
                for j in 0..size {
                    if leq[k * size + j] {
                        leq[i * size + j] = true;
                    }
                }
            }
        }
        for a in 0..size {
            for b in (a + 1)..size {
                if leq[a * size + b] && leq[b * size + a] {
                    return Err(LatticeError::NotAPartialOrder { a, b });
                }
            }
        }

        let mut meet = vec![0; size * size];
        let mut join = vec![0; size * size];
        for a in 0..size {
            for b in a..size {
                let m = extremal_bound(size, &leq, a, b, BoundKind::Meet).ok_or(
                    LatticeError::NotALattice {
                        a,
                        b,
                        kind: BoundKind::Meet,
                    },
                )?;
                let j = extremal_bound(size, &leq, a, b, BoundKind::Join).ok_or(
                    LatticeError::NotALattice {
                        a,
                        b,
                        kind: BoundKind::Join,
                    },
                )?;
                meet[a * size + b] = m;
                meet[b * size + a] = m;
                join[a * size + b] = j;
                join[b * size + a] = j;
            }
        }

        let bottom = (1..size).fold(0, |acc, x| meet[acc * size + x]);
        let top = (1..size).fold(0, |acc, x| join[acc * size + x]);
        let mut lattice = FiniteLattice {
            size,
            leq,
            meet,
            join,
            bottom,
            top,
            atoms: Vec::new(),
            labels: (0..size).map(|i| format!("{i}")).collect(),
        };
        lattice.atoms = (0..size).filter(|&x| lattice.covers(x, bottom)).collect();
        Ok(lattice)
    }

    /// Replaces the display labels. Labels carry no structure.
    pub fn with_labels<S: Into<String>>(
        mut self,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self, LatticeError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.size {
            return Err(LatticeError::LabelCount {
                expected: self.size,
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn is_atom(&self, x: usize) -> bool {
        self.atoms.contains(&x)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    /// Index of the element carrying `label`, if any.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// `upper` covers `lower`: `lower < upper` with nothing strictly between.
    pub fn covers(&self, upper: usize, lower: usize) -> bool {
        self.lt(lower, upper) && !(0..self.size).any(|z| self.lt(lower, z) && self.lt(z, upper))
    }

    pub fn meet2(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    pub fn join2(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    /// Greatest lower bound of a family; the empty meet is `top`.
    pub fn meet(&self, subset: impl IntoIterator<Item = usize>) -> usize {
        subset
            .into_iter()
            .fold(self.top, |acc, x| self.meet2(acc, x))
    }

    /// Least upper bound of a family; the empty join is `bottom`.
    pub fn join(&self, subset: impl IntoIterator<Item = usize>) -> usize {
        subset
            .into_iter()
            .fold(self.bottom, |acc, x| self.join2(acc, x))
    }

    /// All `x` with `lo <= x <= hi`, ascending.
    pub fn interval(&self, lo: usize, hi: usize) -> Result<Vec<usize>, LatticeError> {
        if !self.leq(lo, hi) {
            return Err(LatticeError::EmptyInterval { lo, hi });
        }
        Ok((0..self.size)
            .filter(|&x| self.leq(lo, x) && self.leq(x, hi))
            .collect())
    }

    /// Generating pairs of the covering relation, `(lower, upper)` ascending.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for lower in 0..self.size {
            for upper in 0..self.size {
                if self.covers(upper, lower) {
                    pairs.push((lower, upper));
                }
            }
        }
        pairs
    }

    /// Length of the longest chain from `bottom` to `x`.
    pub fn rank(&self, x: usize) -> usize {
        let mut memo = vec![None; self.size];
        self.rank_memo(x, &mut memo)
    }

    fn rank_memo(&self, x: usize, memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(r) = memo[x] {
            return r;
        }
        let r = (0..self.size)
            .filter(|&y| self.covers(x, y))
            .map(|y| self.rank_memo(y, memo) + 1)
            .max()
            .unwrap_or(0);
        memo[x] = Some(r);
        r
    }
}

fn extremal_bound(size: usize, leq: &[bool], a: usize, b: usize, kind: BoundKind) -> Option<usize> {
    let is_bound = |x: usize| match kind {
        BoundKind::Meet => leq[x * size + a] && leq[x * size + b],
        BoundKind::Join => leq[a * size + x] && leq[b * size + x],
    };
    let bounds: Vec<usize> = (0..size).filter(|&x| is_bound(x)).collect();
    bounds.iter().copied().find(|&candidate| {
        bounds.iter().all(|&other| match kind {
            BoundKind::Meet => leq[other * size + candidate],
            BoundKind::Join => leq[candidate * size + other],
        })
    })
}
