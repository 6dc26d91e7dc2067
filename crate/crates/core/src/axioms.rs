//! The eight-axiom battery on finite state property systems.
//!
//! Universal axioms report a counterexample on failure; existence axioms
//! report a witness on success. Weak modularity, irreducibility and infinite
//! length are stated relative to an orthocomplementation: the battery threads
//! the lexicographically least one through them and re-runs the verdict
//! against every other orthocomplementation (up to [`CROSS_CHECK_LIMIT`]).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::lattice::{automorphisms, FiniteLattice, LatticeMap};
use crate::sps::StatePropertySystem;

/// Orthocomplementations examined when cross-checking witness dependence.
pub const CROSS_CHECK_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    StateDetermination,
    Atomicity,
    Orthocomplementation,
    CoveringLaw,
    WeakModularity,
    PlaneTransitivity,
    Irreducibility,
    InfiniteLength,
}

impl Axiom {
    pub const ALL: [Axiom; 8] = [
        Axiom::StateDetermination,
        Axiom::Atomicity,
        Axiom::Orthocomplementation,
        Axiom::CoveringLaw,
        Axiom::WeakModularity,
        Axiom::PlaneTransitivity,
        Axiom::Irreducibility,
        Axiom::InfiniteLength,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::StateDetermination => "state-determination",
            Axiom::Atomicity => "atomicity",
            Axiom::Orthocomplementation => "orthocomplementation",
            Axiom::CoveringLaw => "covering-law",
            Axiom::WeakModularity => "weak-modularity",
            Axiom::PlaneTransitivity => "plane-transitivity",
            Axiom::Irreducibility => "irreducibility",
            Axiom::InfiniteLength => "infinite-length",
        }
    }

    pub fn from_name(name: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One atom pair `(s, t)` carried by an automorphism fixing `[0, s1 ∨ s2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivityWitness {
    pub s: usize,
    pub t: usize,
    pub automorphism: Vec<usize>,
    pub s1: usize,
    pub s2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `map[a]` is `a'`.
    Orthocomplement(Vec<usize>),
    PlaneTransitivity(Vec<TransitivityWitness>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    StatePair {
        p: usize,
        q: usize,
    },
    NonAtomicMeet {
        state: usize,
        meet: usize,
    },
    CoveringTriple {
        a: usize,
        b: usize,
        x: usize,
    },
    ModularityPair {
        a: usize,
        b: usize,
    },
    /// Every atom pair without a witness, in search order.
    UnwitnessedPairs(Vec<(usize, usize)>),
    ReducingElement {
        b: usize,
    },
    /// A largest family of nonzero, mutually orthogonal elements.
    OrthogonalFamily(Vec<usize>),
    /// Orthocomplementations under which the verdict passes and fails.
    WitnessDependent {
        passing: Vec<Vec<usize>>,
        failing: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub passed: bool,
    pub witness: Option<Witness>,
    pub counterexample: Option<Counterexample>,
    pub note: String,
}

impl AxiomVerdict {
    fn pass(axiom: Axiom) -> Self {
        AxiomVerdict {
            axiom,
            passed: true,
            witness: None,
            counterexample: None,
            note: String::new(),
        }
    }

    fn fail(axiom: Axiom, counterexample: Counterexample) -> Self {
        AxiomVerdict {
            axiom,
            passed: false,
            witness: None,
            counterexample: Some(counterexample),
            note: String::new(),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("the lattice admits no orthocomplementation")]
    NoOrthocomplementation,
}

/// Distinct states have distinct strongest actual properties.
pub fn check_state_determination(sps: &StatePropertySystem) -> AxiomVerdict {
    let meets: Vec<usize> = (0..sps.num_states())
        .map(|p| sps.strongest_property(p))
        .collect();
    for p in 0..meets.len() {
        for q in (p + 1)..meets.len() {
            if meets[p] == meets[q] {
                return AxiomVerdict::fail(
                    Axiom::StateDetermination,
                    Counterexample::StatePair { p, q },
                );
            }
        }
    }
    AxiomVerdict::pass(Axiom::StateDetermination)
}

/// The strongest actual property of every state is an atom.
pub fn check_atomicity(sps: &StatePropertySystem) -> AxiomVerdict {
    for state in 0..sps.num_states() {
        let meet = sps.strongest_property(state);
        if !sps.lattice().is_atom(meet) {
            return AxiomVerdict::fail(
                Axiom::Atomicity,
                Counterexample::NonAtomicMeet { state, meet },
            );
        }
    }
    AxiomVerdict::pass(Axiom::Atomicity)
}

/// Whether `map` is an involutive, order-reversing complementation.
pub fn is_orthocomplement(lattice: &FiniteLattice, map: &[usize]) -> bool {
    let n = lattice.size();
    if map.len() != n || map.iter().any(|&x| x >= n) {
        return false;
    }
    (0..n).all(|a| {
        map[map[a]] == a
            && lattice.meet2(a, map[a]) == lattice.bottom()
            && lattice.join2(a, map[a]) == lattice.top()
            && (0..n).all(|b| !lattice.leq(a, b) || lattice.leq(map[b], map[a]))
    })
}

/// Orthocomplementations in lexicographic order of their assignment vectors,
/// stopping after `limit`.
pub fn orthocomplements(lattice: &FiniteLattice, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; lattice.size()];
    if limit > 0 {
        extend_orthocomplement(lattice, &mut map, 0, limit, &mut out);
    }
    out
}

fn compatible(lattice: &FiniteLattice, map: &[usize], a: usize, b: usize) -> bool {
    if lattice.meet2(a, b) != lattice.bottom() || lattice.join2(a, b) != lattice.top() {
        return false;
    }
    // Order reversal against every assigned pair, for both a -> b and b -> a.
    map.iter()
        .enumerate()
        .filter(|(_, &y)| y != usize::MAX)
        .all(|(x, &y)| {
            (!lattice.leq(a, x) || lattice.leq(y, b))
                && (!lattice.leq(x, a) || lattice.leq(b, y))
                && (!lattice.leq(b, x) || lattice.leq(y, a))
                && (!lattice.leq(x, b) || lattice.leq(a, y))
        })
}

fn extend_orthocomplement(
    lattice: &FiniteLattice,
    map: &mut Vec<usize>,
    from: usize,
    limit: usize,
    out: &mut Vec<Vec<usize>>,
) -> bool {
    let Some(a) = (from..map.len()).find(|&x| map[x] == usize::MAX) else {
        out.push(map.clone());
        return out.len() >= limit;
    };
    for b in 0..map.len() {
        if map[b] != usize::MAX || !compatible(lattice, map, a, b) {
            continue;
        }
        map[a] = b;
        map[b] = a;
        let stop = extend_orthocomplement(lattice, map, a + 1, limit, out);
        map[a] = usize::MAX;
        map[b] = usize::MAX;
        if stop {
            return true;
        }
    }
    false
}

pub fn first_orthocomplement(lattice: &FiniteLattice) -> Option<Vec<usize>> {
    orthocomplements(lattice, 1).pop()
}

pub fn check_orthocomplementation(lattice: &FiniteLattice) -> AxiomVerdict {
    match first_orthocomplement(lattice) {
        Some(map) => AxiomVerdict {
            witness: Some(Witness::Orthocomplement(map)),
            ..AxiomVerdict::pass(Axiom::Orthocomplementation)
        },
        None => AxiomVerdict {
            axiom: Axiom::Orthocomplementation,
            passed: false,
            witness: None,
            counterexample: None,
            note: String::from("no orthocomplementation exists"),
        },
    }
}

/// `a < x < a ∨ b` never happens for an atom `b`. Both inequalities are
/// strict, so the conclusion `x = a or x = a ∨ b` is non-strict.
pub fn check_covering_law(lattice: &FiniteLattice) -> AxiomVerdict {
    let n = lattice.size();
    for a in 0..n {
        for &b in lattice.atoms() {
            let ab = lattice.join2(a, b);
            if let Some(x) = (0..n).find(|&x| lattice.lt(a, x) && lattice.lt(x, ab)) {
                return AxiomVerdict::fail(
                    Axiom::CoveringLaw,
                    Counterexample::CoveringTriple { a, b, x },
                )
                .with_note("strict reading: a < x < a∨b");
            }
        }
    }
    AxiomVerdict::pass(Axiom::CoveringLaw).with_note("strict reading: a < x < a∨b")
}

/// Weak modularity under a fixed orthocomplementation `c`.
pub fn weak_modularity_with(lattice: &FiniteLattice, c: &[usize]) -> AxiomVerdict {
    let n = lattice.size();
    for (a, &ac) in c.iter().enumerate().take(n) {
        for b in 0..n {
            if lattice.leq(a, b) && lattice.join2(lattice.meet2(b, ac), a) != b {
                return AxiomVerdict::fail(
                    Axiom::WeakModularity,
                    Counterexample::ModularityPair { a, b },
                );
            }
        }
    }
    AxiomVerdict::pass(Axiom::WeakModularity)
}

/// Irreducibility under a fixed orthocomplementation `c`.
pub fn irreducibility_with(lattice: &FiniteLattice, c: &[usize]) -> AxiomVerdict {
    let n = lattice.size();
    for b in 0..n {
        if b == lattice.bottom() || b == lattice.top() {
            continue;
        }
        let central =
            (0..n).all(|a| lattice.join2(lattice.meet2(b, a), lattice.meet2(b, c[a])) == b);
        if central {
            return AxiomVerdict::fail(
                Axiom::Irreducibility,
                Counterexample::ReducingElement { b },
            );
        }
    }
    AxiomVerdict::pass(Axiom::Irreducibility)
}

/// Largest family of nonzero elements pairwise orthogonal under `c`
/// (`x ⊥ y` iff `x ≤ y'`); the lexicographically first among the largest.
pub fn max_orthogonal_family(lattice: &FiniteLattice, c: &[usize]) -> Vec<usize> {
    let nodes: Vec<usize> = (0..lattice.size())
        .filter(|&x| x != lattice.bottom())
        .collect();
    let mut best = Vec::new();
    let mut current = Vec::new();
    grow_family(lattice, c, &nodes, 0, &mut current, &mut best);
    best
}

fn grow_family(
    lattice: &FiniteLattice,
    c: &[usize],
    nodes: &[usize],
    from: usize,
    current: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    if current.len() > best.len() {
        *best = current.clone();
    }
    if current.len() + (nodes.len() - from) <= best.len() {
        return;
    }
    for i in from..nodes.len() {
        let x = nodes[i];
        if current.iter().all(|&y| lattice.leq(x, c[y])) {
            current.push(x);
            grow_family(lattice, c, nodes, i + 1, current, best);
            current.pop();
        }
    }
}

/// Always fails on a finite lattice; the note carries the largest
/// orthogonal family size.
pub fn infinite_length_with(lattice: &FiniteLattice, c: &[usize]) -> AxiomVerdict {
    let family = max_orthogonal_family(lattice, c);
    let note = format!(
        "finite lattice; maximum orthogonal family size {}",
        family.len()
    );
    AxiomVerdict::fail(
        Axiom::InfiniteLength,
        Counterexample::OrthogonalFamily(family),
    )
    .with_note(note)
}

fn cross_checked(
    lattice: &FiniteLattice,
    check: fn(&FiniteLattice, &[usize]) -> AxiomVerdict,
) -> Result<AxiomVerdict, AxiomError> {
    let all = orthocomplements(lattice, CROSS_CHECK_LIMIT);
    let Some(first) = all.first() else {
        return Err(AxiomError::NoOrthocomplementation);
    };
    let fixed = check(lattice, first);
    let (mut passing, mut failing) = (Vec::new(), Vec::new());
    for c in &all {
        if check(lattice, c).passed {
            passing.push(c.clone());
        } else {
            failing.push(c.clone());
        }
    }
    if !passing.is_empty() && !failing.is_empty() {
        return Ok(AxiomVerdict::fail(
            fixed.axiom,
            Counterexample::WitnessDependent { passing, failing },
        )
        .with_note("verdict depends on the choice of orthocomplementation"));
    }
    let note = if all.len() >= CROSS_CHECK_LIMIT {
        format!(
            "agrees across the first {} orthocomplementations",
            all.len()
        )
    } else {
        format!("agrees across all {} orthocomplementations", all.len())
    };
    let joined = if fixed.note.is_empty() {
        note
    } else {
        format!("{}; {note}", fixed.note)
    };
    Ok(fixed.with_note(joined))
}

pub fn check_weak_modularity(lattice: &FiniteLattice) -> Result<AxiomVerdict, AxiomError> {
    cross_checked(lattice, weak_modularity_with)
}

pub fn check_irreducibility(lattice: &FiniteLattice) -> Result<AxiomVerdict, AxiomError> {
    cross_checked(lattice, irreducibility_with)
}

pub fn check_infinite_length(lattice: &FiniteLattice) -> Result<AxiomVerdict, AxiomError> {
    cross_checked(lattice, infinite_length_with)
}

/// For every ordered atom pair `(s, t)`, looks for an automorphism `f` with
/// `f(s) = t` fixing `[0, s1 ∨ s2]` pointwise for distinct atoms `s1, s2`.
/// Automorphisms are tried in lexicographic order, atom pairs ascending.
pub fn check_plane_transitivity(lattice: &FiniteLattice) -> AxiomVerdict {
    let auts = automorphisms(lattice);
    let atoms = lattice.atoms();
    let mut witnesses = Vec::new();
    let mut missing = Vec::new();
    for &s in atoms {
        for &t in atoms {
            match transitivity_witness(lattice, &auts, s, t) {
                Some(w) => witnesses.push(w),
                None => missing.push((s, t)),
            }
        }
    }
    let note = format!(
        "{} automorphisms, {} of {} atom pairs witnessed",
        auts.len(),
        witnesses.len(),
        atoms.len() * atoms.len()
    );
    if missing.is_empty() {
        AxiomVerdict {
            witness: Some(Witness::PlaneTransitivity(witnesses)),
            ..AxiomVerdict::pass(Axiom::PlaneTransitivity)
        }
        .with_note(note)
    } else {
        AxiomVerdict::fail(
            Axiom::PlaneTransitivity,
            Counterexample::UnwitnessedPairs(missing),
        )
        .with_note(note)
    }
}

fn transitivity_witness(
    lattice: &FiniteLattice,
    auts: &[LatticeMap],
    s: usize,
    t: usize,
) -> Option<TransitivityWitness> {
    let atoms = lattice.atoms();
    for f in auts.iter().filter(|f| f.apply(s) == t) {
        for (i, &s1) in atoms.iter().enumerate() {
            for &s2 in &atoms[i + 1..] {
                let top = lattice.join2(s1, s2);
                let fixed = (0..lattice.size())
                    .filter(|&x| lattice.leq(x, top))
                    .all(|x| f.apply(x) == x);
                if fixed {
                    return Some(TransitivityWitness {
                        s,
                        t,
                        automorphism: f.assignment().to_vec(),
                        s1,
                        s2,
                    });
                }
            }
        }
    }
    None
}

/// Automorphisms commuting with the orthocomplementation `c`.
pub fn ortho_automorphisms(lattice: &FiniteLattice, c: &[usize]) -> Vec<LatticeMap> {
    automorphisms(lattice)
        .into_iter()
        .filter(|f| (0..lattice.size()).all(|x| f.apply(c[x]) == c[f.apply(x)]))
        .collect()
}

/// All eight checks in order. Checks needing an orthocomplementation fail
/// with an explanatory note when none exists.
pub fn run_battery(sps: &StatePropertySystem) -> Vec<AxiomVerdict> {
    let lattice = sps.lattice();
    let dependent = |axiom: Axiom, r: Result<AxiomVerdict, AxiomError>| {
        r.unwrap_or_else(|e| AxiomVerdict {
            axiom,
            passed: false,
            witness: None,
            counterexample: None,
            note: format!("not applicable: {e}"),
        })
    };
    vec![
        check_state_determination(sps),
        check_atomicity(sps),
        check_orthocomplementation(lattice),
        check_covering_law(lattice),
        dependent(Axiom::WeakModularity, check_weak_modularity(lattice)),
        check_plane_transitivity(lattice),
        dependent(Axiom::Irreducibility, check_irreducibility(lattice)),
        dependent(Axiom::InfiniteLength, check_infinite_length(lattice)),
    ]
}
