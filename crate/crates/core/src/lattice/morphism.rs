use alloc::vec;
use alloc::vec::Vec;

use super::FiniteLattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MapKind {
    Isomorphism,
    Automorphism,
}

/// An element assignment between two lattices, `assignment[x]` being the image of `x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeMap {
    assignment: Vec<usize>,
    kind: MapKind,
}

impl LatticeMap {
    pub fn identity(size: usize) -> Self {
        LatticeMap {
            assignment: (0..size).collect(),
            kind: MapKind::Automorphism,
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn is_identity(&self) -> bool {
        self.assignment.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` after `first`: `x -> self(first(x))`.
    pub fn compose(&self, first: &LatticeMap) -> LatticeMap {
        LatticeMap {
            assignment: first
                .assignment
                .iter()
                .map(|&x| self.assignment[x])
                .collect(),
            kind: if self.kind == MapKind::Automorphism && first.kind == MapKind::Automorphism {
                MapKind::Automorphism
            } else {
                MapKind::Isomorphism
            },
        }
    }

    pub fn inverse(&self) -> LatticeMap {
        let mut inv = vec![0; self.assignment.len()];
        for (x, &y) in self.assignment.iter().enumerate() {
            inv[y] = x;
        }
        LatticeMap {
            assignment: inv,
            kind: self.kind,
        }
    }

    /// Table check: bijective, and `x <= y` iff `f(x) <= f(y)`.
    pub fn verify(&self, source: &FiniteLattice, target: &FiniteLattice) -> bool {
        let n = source.size();
        if n != target.size() || self.assignment.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &y in &self.assignment {
            if y >= n || seen[y] {
                return false;
            }
            seen[y] = true;
        }
        (0..n).all(|x| {
            (0..n).all(|y| source.leq(x, y) == target.leq(self.assignment[x], self.assignment[y]))
        })
    }
}

/// Isomorphism-invariant fingerprint of an element used to prune candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Fingerprint {
    rank: usize,
    below: usize,
    above: usize,
    lower_covers: usize,
    upper_covers: usize,
}

fn fingerprints(l: &FiniteLattice) -> Vec<Fingerprint> {
    let n = l.size();
    (0..n)
        .map(|x| Fingerprint {
            rank: l.rank(x),
            below: (0..n).filter(|&y| l.leq(y, x)).count(),
            above: (0..n).filter(|&y| l.leq(x, y)).count(),
            lower_covers: (0..n).filter(|&y| l.covers(x, y)).count(),
            upper_covers: (0..n).filter(|&y| l.covers(y, x)).count(),
        })
        .collect()
}

struct Search<'a> {
    source: &'a FiniteLattice,
    target: &'a FiniteLattice,
    candidates: Vec<Vec<usize>>,
    assignment: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn new<'a>(source: &'a FiniteLattice, target: &'a FiniteLattice) -> Option<Search<'a>> {
        if source.size() != target.size() {
            return None;
        }
        let fs = fingerprints(source);
        let ft = fingerprints(target);
        let mut sorted_s = fs.clone();
        let mut sorted_t = ft.clone();
        let key = |f: &Fingerprint| (f.rank, f.below, f.above, f.lower_covers, f.upper_covers);
        sorted_s.sort_by_key(key);
        sorted_t.sort_by_key(key);
        if sorted_s != sorted_t {
            return None;
        }
        let candidates = fs
            .iter()
            .map(|f| (0..target.size()).filter(|&y| ft[y] == *f).collect())
            .collect();
        Some(Search {
            source,
            target,
            candidates,
            assignment: Vec::with_capacity(source.size()),
            used: vec![false; target.size()],
        })
    }

    fn consistent(&self, x: usize, y: usize) -> bool {
        self.assignment.iter().enumerate().all(|(u, &v)| {
            self.source.leq(u, x) == self.target.leq(v, y)
                && self.source.leq(x, u) == self.target.leq(y, v)
        })
    }

    /// Depth-first over source elements in index order, target candidates ascending,
    /// so maps are produced in lexicographic order of their assignment vectors.
    fn run(&mut self, sink: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let x = self.assignment.len();
        if x == self.source.size() {
            return sink(&self.assignment);
        }
        for i in 0..self.candidates[x].len() {
            let y = self.candidates[x][i];
            if self.used[y] || !self.consistent(x, y) {
                continue;
            }
            self.used[y] = true;
            self.assignment.push(y);
            let stop = self.run(sink);
            self.assignment.pop();
            self.used[y] = false;
            if stop {
                return true;
            }
        }
        false
    }
}

/// Lexicographically least order isomorphism from `source` onto `target`.
pub fn find_isomorphism(source: &FiniteLattice, target: &FiniteLattice) -> Option<LatticeMap> {
    let mut search = Search::new(source, target)?;
    let mut found = None;
    search.run(&mut |assignment| {
        found = Some(LatticeMap {
            assignment: assignment.to_vec(),
            kind: MapKind::Isomorphism,
        });
        true
    });
    found
}

/// Every order automorphism, sorted lexicographically; the identity comes first.
pub fn automorphisms(lattice: &FiniteLattice) -> Vec<LatticeMap> {
    let mut maps = Vec::new();
    if let Some(mut search) = Search::new(lattice, lattice) {
        search.run(&mut |assignment| {
            maps.push(LatticeMap {
                assignment: assignment.to_vec(),
                kind: MapKind::Automorphism,
            });
            false
        });
    }
    maps
}
