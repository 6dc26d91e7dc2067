//! Finite state property systems.
//!
//! The actuality relation is stored as a dense `states x properties` table, so
//! `ξ(p)` is a row and `κ(a)` a column of the same data and the duality
//! `a ∈ ξ(p) ⇔ p ∈ κ(a)` holds by construction.

mod quantum;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::hilbert::HilbertError;
use crate::lattice::{FiniteLattice, LatticeError};

pub use quantum::{quantum_sps, QuantumSps};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Def1Violation {
    /// Top not actual, or bottom actual, in `state`.
    TopBottom { state: usize },
    /// `meet(family)` actuality disagrees with actuality of every member.
    MeetClosure { state: usize, family: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpsError {
    #[error("actuality table is {rows}x{cols}, expected {states}x{properties}")]
    TableShape {
        rows: usize,
        cols: usize,
        states: usize,
        properties: usize,
    },
    #[error("state {state}: top must be actual and bottom must not be")]
    Def1TopBottomViolation { state: usize },
    #[error("state {state}: meet of family {family:?} violates meet closure")]
    Def1MeetClosureViolation { state: usize, family: Vec<usize> },
    #[error("operator dimension {found} differs from {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

impl From<Def1Violation> for SpsError {
    fn from(v: Def1Violation) -> Self {
        match v {
            Def1Violation::TopBottom { state } => SpsError::Def1TopBottomViolation { state },
            Def1Violation::MeetClosure { state, family } => {
                SpsError::Def1MeetClosureViolation { state, family }
            }
        }
    }
}

/// States, a property lattice, and the actuality relation between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatePropertySystem {
    lattice: FiniteLattice,
    num_states: usize,
    actual: Vec<bool>,
    state_labels: Vec<String>,
}

/// Every condition-(i)/(ii) failure of a candidate actuality table, in state order.
///
/// Meet closure is checked on all pairs and on the full actual set of each
/// state; in a finite lattice binary meets generate every finite meet.
pub fn def1_violations(lattice: &FiniteLattice, table: &[Vec<bool>]) -> Vec<Def1Violation> {
    let mut out = Vec::new();
    for (state, row) in table.iter().enumerate() {
        if !row[lattice.top()] || row[lattice.bottom()] {
            out.push(Def1Violation::TopBottom { state });
        }
        let n = lattice.size();
        let mut pair_failure = false;
        for a in 0..n {
            for b in (a + 1)..n {
                let m = lattice.meet2(a, b);
                if row[m] != (row[a] && row[b]) {
                    out.push(Def1Violation::MeetClosure {
                        state,
                        family: Vec::from([a, b]),
                    });
                    pair_failure = true;
                }
            }
        }
        if !pair_failure {
            let family: Vec<usize> = (0..n).filter(|&a| row[a]).collect();
            if !row[lattice.meet(family.iter().copied())] {
                out.push(Def1Violation::MeetClosure { state, family });
            }
        }
    }
    out
}

impl StatePropertySystem {
    /// Builds ξ from the rows of `table` (one row per state, one column per
    /// lattice element) and rejects tables violating conditions (i) or (ii).
    pub fn new(lattice: FiniteLattice, table: &[Vec<bool>]) -> Result<Self, SpsError> {
        let n = lattice.size();
        if let Some(row) = table.iter().find(|row| row.len() != n) {
            return Err(SpsError::TableShape {
                rows: table.len(),
                cols: row.len(),
                states: table.len(),
                properties: n,
            });
        }
        if let Some(v) = def1_violations(&lattice, table).into_iter().next() {
            return Err(v.into());
        }
        Ok(Self::from_parts_unchecked(lattice, table))
    }

    pub(crate) fn from_parts_unchecked(lattice: FiniteLattice, table: &[Vec<bool>]) -> Self {
        let num_states = table.len();
        StatePropertySystem {
            lattice,
            num_states,
            actual: table.iter().flatten().copied().collect(),
            state_labels: (0..num_states).map(|p| format!("s{p}")).collect(),
        }
    }

    /// Builds from per-state actual property lists.
    pub fn from_actual_sets(
        lattice: FiniteLattice,
        actual: &[Vec<usize>],
    ) -> Result<Self, SpsError> {
        let n = lattice.size();
        let mut table = Vec::with_capacity(actual.len());
        for set in actual {
            let mut row = alloc::vec![false; n];
            for &a in set {
                if a >= n {
                    return Err(LatticeError::IndexOutOfRange { index: a, size: n }.into());
                }
                row[a] = true;
            }
            table.push(row);
        }
        Self::new(lattice, &table)
    }

    pub fn with_state_labels<S: Into<String>>(
        mut self,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self, SpsError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.num_states {
            return Err(LatticeError::LabelCount {
                expected: self.num_states,
                got: labels.len(),
            }
            .into());
        }
        self.state_labels = labels;
        Ok(self)
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_properties(&self) -> usize {
        self.lattice.size()
    }

    pub fn state_labels(&self) -> &[String] {
        &self.state_labels
    }

    pub fn state_label(&self, p: usize) -> &str {
        &self.state_labels[p]
    }

    /// `ρ(p, a) = A`.
    pub fn is_actual(&self, p: usize, a: usize) -> bool {
        self.actual[p * self.lattice.size() + a]
    }

    pub fn xi_row(&self, p: usize) -> &[bool] {
        let n = self.lattice.size();
        &self.actual[p * n..(p + 1) * n]
    }

    /// `ξ(p)`, ascending.
    pub fn xi(&self, p: usize) -> Vec<usize> {
        (0..self.lattice.size())
            .filter(|&a| self.is_actual(p, a))
            .collect()
    }

    /// `κ(a)`, ascending.
    pub fn kappa(&self, a: usize) -> Vec<usize> {
        (0..self.num_states)
            .filter(|&p| self.is_actual(p, a))
            .collect()
    }

    /// Meet of everything actual in `p`.
    pub fn strongest_property(&self, p: usize) -> usize {
        self.lattice.meet(self.xi(p))
    }

    /// `p < q` iff `ξ(q) ⊆ ξ(p)`.
    pub fn state_preorder(&self, p: usize, q: usize) -> bool {
        (0..self.lattice.size()).all(|a| !self.is_actual(q, a) || self.is_actual(p, a))
    }

    /// `a < b` iff `κ(a) ⊆ κ(b)`.
    pub fn property_preorder(&self, a: usize, b: usize) -> bool {
        (0..self.num_states).all(|p| !self.is_actual(p, a) || self.is_actual(p, b))
    }

    /// Canonical system with one state per atom, each making exactly the
    /// properties above its atom actual.
    pub fn atomic(lattice: FiniteLattice) -> Self {
        let table: Vec<Vec<bool>> = lattice
            .atoms()
            .iter()
            .map(|&s| (0..lattice.size()).map(|x| lattice.leq(s, x)).collect())
            .collect();
        let labels: Vec<String> = lattice
            .atoms()
            .iter()
            .map(|&s| String::from(lattice.label(s)))
            .collect();
        let mut sps = Self::from_parts_unchecked(lattice, &table);
        sps.state_labels = labels;
        sps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::gallery;
    use alloc::vec;
    use proptest::prelude::*;

    fn square_two_state() -> StatePropertySystem {
        // ξ(p) = {a, 1}, ξ(q) = {a', 1}
        StatePropertySystem::from_actual_sets(gallery::boolean_square(), &[vec![1, 3], vec![2, 3]])
            .unwrap()
    }

    #[test]
    fn minimal_entity() {
        let sps = StatePropertySystem::from_actual_sets(gallery::chain(2), &[vec![1]]).unwrap();
        assert_eq!(sps.xi(0), vec![1]);
        assert_eq!(sps.kappa(0), Vec::<usize>::new());
    }

    #[test]
    fn complementary_pair_forces_bottom() {
        let err =
            StatePropertySystem::from_actual_sets(gallery::boolean_square(), &[vec![1, 2, 3]])
                .unwrap_err();
        assert_eq!(
            err,
            SpsError::Def1MeetClosureViolation {
                state: 0,
                family: vec![1, 2]
            }
        );
    }

    #[test]
    fn top_bottom_condition() {
        let err = StatePropertySystem::from_actual_sets(gallery::chain(2), &[vec![]]).unwrap_err();
        assert_eq!(err, SpsError::Def1TopBottomViolation { state: 0 });
        let err =
            StatePropertySystem::from_actual_sets(gallery::chain(2), &[vec![0, 1]]).unwrap_err();
        assert_eq!(err, SpsError::Def1TopBottomViolation { state: 0 });
    }

    #[test]
    fn upward_closure_is_required() {
        // In the cube, a actual but ab not: the pair (a, ab) has meet a.
        let err =
            StatePropertySystem::from_actual_sets(gallery::boolean(3), &[vec![1, 7]]).unwrap_err();
        assert_eq!(
            err,
            SpsError::Def1MeetClosureViolation {
                state: 0,
                family: vec![1, 3]
            }
        );
    }

    #[test]
    fn two_state_square() {
        let sps = square_two_state();
        assert!(sps.state_preorder(0, 0));
        assert!(!sps.state_preorder(0, 1));
        assert!(sps.property_preorder(1, 3));
        assert!(!sps.property_preorder(1, 2));
        for a in 0..4 {
            assert!(sps.property_preorder(0, a));
        }
    }

    #[test]
    fn weakest_state_is_below_everything() {
        let sps = StatePropertySystem::from_actual_sets(
            gallery::boolean_square(),
            &[vec![1, 3], vec![2, 3], vec![3]],
        )
        .unwrap();
        for p in 0..3 {
            assert!(sps.state_preorder(p, 2));
        }
    }

    #[test]
    fn table_shape_mismatch() {
        let err =
            StatePropertySystem::new(gallery::chain(2), &[vec![false, true, false]]).unwrap_err();
        assert!(matches!(err, SpsError::TableShape { .. }));
    }

    #[test]
    fn atomic_system_is_valid() {
        for (_, l) in gallery::canonical_corpus() {
            let sps = StatePropertySystem::atomic(l.clone());
            let table: Vec<Vec<bool>> = (0..sps.num_states())
                .map(|p| sps.xi_row(p).to_vec())
                .collect();
            assert!(def1_violations(&l, &table).is_empty());
        }
    }

    fn random_sps(lattice_index: usize, seeds: Vec<u8>) -> Option<StatePropertySystem> {
        let corpus = gallery::canonical_corpus();
        let lattice = corpus[lattice_index % corpus.len()].1.clone();
        // Each state is generated by an element g: ξ = up-set of g (g ≠ 0).
        let table: Vec<Vec<bool>> = seeds
            .iter()
            .map(|s| {
                let g = 1 + (*s as usize) % (lattice.size() - 1);
                let g = if g == lattice.bottom() {
                    lattice.top()
                } else {
                    g
                };
                (0..lattice.size()).map(|x| lattice.leq(g, x)).collect()
            })
            .collect();
        StatePropertySystem::new(lattice, &table).ok()
    }

    proptest! {
        #[test]
        fn duality_and_preorders(index in 0usize..6, seeds in proptest::collection::vec(any::<u8>(), 1..5)) {
            let sps = random_sps(index, seeds).unwrap();
            for p in 0..sps.num_states() {
                for a in 0..sps.num_properties() {
                    prop_assert_eq!(sps.xi(p).contains(&a), sps.kappa(a).contains(&p));
                }
            }
            let ns = sps.num_states();
            let np = sps.num_properties();
            for p in 0..ns {
                prop_assert!(sps.state_preorder(p, p));
                for q in 0..ns {
                    for r in 0..ns {
                        if sps.state_preorder(p, q) && sps.state_preorder(q, r) {
                            prop_assert!(sps.state_preorder(p, r));
                        }
                    }
                }
            }
            for a in 0..np {
                prop_assert!(sps.property_preorder(a, a));
                for b in 0..np {
                    for c in 0..np {
                        if sps.property_preorder(a, b) && sps.property_preorder(b, c) {
                            prop_assert!(sps.property_preorder(a, c));
                        }
                    }
                }
            }
        }
    }
}
