use alloc::vec;
use alloc::vec::Vec;

use super::{SubentityError, SubentityWitness};
use crate::sps::StatePropertySystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Partial property-map assignments tried.
    pub nodes: u64,
}

/// Lexicographically least witness, ordering first by the property map and
/// then by the state map. `Ok(None)` means the search space was exhausted.
pub fn search_witness(
    part: &StatePropertySystem,
    whole: &StatePropertySystem,
    budget: u64,
) -> Result<Option<SubentityWitness>, SubentityError> {
    search_witness_stats(part, whole, budget).map(|(w, _)| w)
}

pub fn search_witness_stats(
    part: &StatePropertySystem,
    whole: &StatePropertySystem,
    budget: u64,
) -> Result<(Option<SubentityWitness>, SearchStats), SubentityError> {
    let mut search = Search {
        part,
        whole,
        budget,
        nodes: 0,
        n: Vec::with_capacity(part.num_properties()),
        used: vec![false; whole.num_properties()],
    };
    let found = search.extend()?;
    Ok((
        found,
        SearchStats {
            nodes: search.nodes,
        },
    ))
}

struct Search<'a> {
    part: &'a StatePropertySystem,
    whole: &'a StatePropertySystem,
    budget: u64,
    nodes: u64,
    n: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self) -> Result<Option<SubentityWitness>, SubentityError> {
        if self.n.len() == self.part.num_properties() {
            return Ok(self.complete());
        }
        for image in 0..self.whole.num_properties() {
            if self.used[image] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(SubentityError::BudgetExhausted {
                    budget: self.budget,
                });
            }
            self.n.push(image);
            self.used[image] = true;
            if self.consistent() {
                if let Some(w) = self.extend()? {
                    return Ok(Some(w));
                }
            }
            self.used[image] = false;
            self.n.pop();
        }
        Ok(None)
    }

    fn pulled_prefix(&self, q: usize) -> impl Iterator<Item = bool> + '_ {
        self.n
            .iter()
            .map(move |&image| self.whole.is_actual(q, image))
    }

    fn matches(&self, p: usize, q: usize) -> bool {
        let row = &self.part.xi_row(p)[..self.n.len()];
        row.iter().copied().eq(self.pulled_prefix(q))
    }

    /// Every whole state still has a possible image and every part state a
    /// possible preimage, judged on the properties assigned so far.
    fn consistent(&self) -> bool {
        let (ps, qs) = (self.part.num_states(), self.whole.num_states());
        (0..qs).all(|q| (0..ps).any(|p| self.matches(p, q)))
            && (0..ps).all(|p| (0..qs).any(|q| self.matches(p, q)))
    }

    fn complete(&self) -> Option<SubentityWitness> {
        let candidates: Vec<Vec<usize>> = (0..self.whole.num_states())
            .map(|q| {
                (0..self.part.num_states())
                    .filter(|&p| self.matches(p, q))
                    .collect()
            })
            .collect();
        let state_map = least_surjection(&candidates, self.part.num_states())?;
        Some(SubentityWitness {
            state_map,
            property_map: self.n.clone(),
        })
    }
}

/// Lexicographically least `m` with `m(q) ∈ candidates[q]` hitting all of `0..targets`.
pub(crate) fn least_surjection(candidates: &[Vec<usize>], targets: usize) -> Option<Vec<usize>> {
    let mut m = Vec::with_capacity(candidates.len());
    let mut covered = vec![false; targets];
    for q in 0..candidates.len() {
        let chosen = candidates[q].iter().copied().find(|&p| {
            let was = covered[p];
            covered[p] = true;
            let ok = coverable(candidates, q + 1, &covered);
            covered[p] = was;
            ok
        })?;
        covered[chosen] = true;
        m.push(chosen);
    }
    Some(m)
}

/// Whether the uncovered targets can be matched into distinct sources `from..`.
fn coverable(candidates: &[Vec<usize>], from: usize, covered: &[bool]) -> bool {
    let sources = candidates.len() - from;
    let mut owner: Vec<Option<usize>> = vec![None; sources];
    for target in (0..covered.len()).filter(|&t| !covered[t]) {
        let mut seen = vec![false; sources];
        if !augment(candidates, from, target, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(
    candidates: &[Vec<usize>],
    from: usize,
    target: usize,
    owner: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for s in 0..owner.len() {
        if seen[s] || !candidates[from + s].contains(&target) {
            continue;
        }
        seen[s] = true;
        let free = match owner[s] {
            None => true,
            Some(other) => augment(candidates, from, other, owner, seen),
        };
        if free {
            owner[s] = Some(target);
            return true;
        }
    }
    false
}
