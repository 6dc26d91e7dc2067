//! Finite laboratory worlds and the state property systems they induce.
//!
//! Each laboratory holds a roster of named objects. Every object row names
//! the preparing device that produced it and records a yes/no outcome for
//! every registering device. Extensions are sets of object names. Yes
//! frequencies are exact rationals, and they must agree across laboratories.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::lattice::{FiniteLattice, LatticeError};
use crate::sps::{def1_violations, Def1Violation, StatePropertySystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabObject {
    pub name: String,
    /// `None` marks an object no preparing device accounts for.
    pub preparer: Option<usize>,
    /// One outcome per registering device.
    pub outcomes: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lab {
    pub id: String,
    pub objects: Vec<LabObject>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabWorld {
    pub preparers: Vec<String>,
    pub registers: Vec<String>,
    /// Registering devices eligible to define properties.
    pub ideal: Vec<bool>,
    pub labs: Vec<Lab>,
}

/// `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        u128::from(self.num) * u128::from(other.den) == u128::from(other.num) * u128::from(self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WorldIssue {
    PreparerOutOfRange {
        lab: usize,
        object: usize,
        preparer: usize,
    },
    OutcomeCount {
        lab: usize,
        object: usize,
        expected: usize,
        found: usize,
    },
    IdealFlagCount {
        expected: usize,
        found: usize,
    },
    EmptyPreparer {
        lab: usize,
        preparer: usize,
    },
    FrequencyMismatch {
        preparer: usize,
        register: usize,
        lab1: usize,
        lab2: usize,
        first: Ratio,
        second: Ratio,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WorldReport {
    pub issues: Vec<WorldIssue>,
}

impl WorldReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LecceError {
    #[error("laboratory world is invalid ({} issues)", .0.issues.len())]
    WorldInvalid(WorldReport),
}

impl LabWorld {
    pub fn new(preparers: Vec<String>, registers: Vec<String>, ideal: Vec<bool>) -> Self {
        LabWorld {
            preparers,
            registers,
            ideal,
            labs: Vec::new(),
        }
    }

    /// Sorted distinct object names of lab `j`.
    pub fn domain(&self, j: usize) -> Vec<&str> {
        let set: BTreeSet<&str> = self.labs[j]
            .objects
            .iter()
            .map(|o| o.name.as_str())
            .collect();
        set.into_iter().collect()
    }

    fn collect(&self, j: usize, keep: impl Fn(&LabObject) -> bool) -> BTreeSet<&str> {
        self.labs[j]
            .objects
            .iter()
            .filter(|o| keep(o))
            .map(|o| o.name.as_str())
            .collect()
    }

    /// Names prepared by device `pi` in lab `j`, sorted.
    pub fn prepared_by(&self, j: usize, pi: usize) -> Vec<&str> {
        self.collect(j, |o| o.preparer == Some(pi))
            .into_iter()
            .collect()
    }

    /// Names answering yes to device `r` in lab `j`, sorted.
    pub fn registered_yes(&self, j: usize, r: usize) -> Vec<&str> {
        self.collect(j, |o| o.outcomes.get(r).copied().unwrap_or(false))
            .into_iter()
            .collect()
    }

    /// `|ρ_j(π) ∩ ρ_j(r)| / |ρ_j(π)|`, or `None` when `π` prepares nothing in lab `j`.
    pub fn frequency(&self, j: usize, pi: usize, r: usize) -> Option<Ratio> {
        let prepared = self.collect(j, |o| o.preparer == Some(pi));
        if prepared.is_empty() {
            return None;
        }
        let yes = self.collect(j, |o| o.outcomes.get(r).copied().unwrap_or(false));
        let num = prepared.intersection(&yes).count() as u64;
        Some(Ratio {
            num,
            den: prepared.len() as u64,
        })
    }
}

/// Structural checks plus agreement of every yes frequency across labs.
pub fn validate_world(w: &LabWorld) -> WorldReport {
    let mut issues = Vec::new();
    if w.ideal.len() != w.registers.len() {
        issues.push(WorldIssue::IdealFlagCount {
            expected: w.registers.len(),
            found: w.ideal.len(),
        });
    }
    for (lab, l) in w.labs.iter().enumerate() {
        for (object, o) in l.objects.iter().enumerate() {
            if let Some(p) = o.preparer.filter(|&p| p >= w.preparers.len()) {
                issues.push(WorldIssue::PreparerOutOfRange {
                    lab,
                    object,
                    preparer: p,
                });
            }
            if o.outcomes.len() != w.registers.len() {
                issues.push(WorldIssue::OutcomeCount {
                    lab,
                    object,
                    expected: w.registers.len(),
                    found: o.outcomes.len(),
                });
            }
        }
        for preparer in 0..w.preparers.len() {
            if !l.objects.iter().any(|o| o.preparer == Some(preparer)) {
                issues.push(WorldIssue::EmptyPreparer { lab, preparer });
            }
        }
    }
    if !issues.is_empty() {
        return WorldReport { issues };
    }
    for preparer in 0..w.preparers.len() {
        for register in 0..w.registers.len() {
            let freqs: Vec<Ratio> = (0..w.labs.len())
                .map(|j| {
                    w.frequency(j, preparer, register)
                        .expect("checked nonempty")
                })
                .collect();
            for lab1 in 0..freqs.len() {
                for lab2 in (lab1 + 1)..freqs.len() {
                    if freqs[lab1] != freqs[lab2] {
                        issues.push(WorldIssue::FrequencyMismatch {
                            preparer,
                            register,
                            lab1,
                            lab2,
                            first: freqs[lab1],
                            second: freqs[lab2],
                        });
                    }
                }
            }
        }
    }
    WorldReport { issues }
}

fn ensure_valid(w: &LabWorld) -> Result<(), LecceError> {
    let report = validate_world(w);
    if report.is_valid() {
        Ok(())
    } else {
        Err(LecceError::WorldInvalid(report))
    }
}

/// A class of preparing devices with identical frequency rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationalState {
    pub id: usize,
    pub members: Vec<usize>,
    /// Per lab, the sorted union of the members' extensions.
    pub extensions: Vec<Vec<String>>,
}

/// A class of ideal registering devices with identical extensions in every lab.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationalProperty {
    pub id: usize,
    pub members: Vec<usize>,
    pub extensions: Vec<Vec<String>>,
}

fn union_extensions<'a>(
    w: &'a LabWorld,
    members: &[usize],
    ext: impl Fn(usize, usize) -> Vec<&'a str>,
) -> Vec<Vec<String>> {
    (0..w.labs.len())
        .map(|j| {
            let set: BTreeSet<&str> = members.iter().flat_map(|&d| ext(j, d)).collect();
            set.into_iter().map(String::from).collect()
        })
        .collect()
}

/// Groups `0..count` into classes of `same`-related items, in order of first member.
fn classes(count: usize, same: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for x in 0..count {
        match out.iter_mut().find(|c| same(c[0], x)) {
            Some(c) => c.push(x),
            None => out.push(vec![x]),
        }
    }
    out
}

/// Preparing devices grouped by equal frequency rows over every registering device.
pub fn partition_states(w: &LabWorld) -> Result<Vec<OperationalState>, LecceError> {
    ensure_valid(w)?;
    if w.labs.is_empty() {
        return Ok(Vec::new());
    }
    let row = |pi: usize| -> Vec<Ratio> {
        (0..w.registers.len())
            .map(|r| w.frequency(0, pi, r).expect("validated"))
            .collect()
    };
    Ok(classes(w.preparers.len(), |a, b| row(a) == row(b))
        .into_iter()
        .enumerate()
        .map(|(id, members)| {
            let extensions = union_extensions(w, &members, |j, d| w.prepared_by(j, d));
            OperationalState {
                id,
                members,
                extensions,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectPartition {
    pub properties: Vec<OperationalProperty>,
    /// Ideal device pairs with equal yes frequencies for every preparer but
    /// different extensions somewhere.
    pub frequency_only_pairs: Vec<(usize, usize)>,
}

/// Ideal registering devices grouped by equal extensions in every lab.
pub fn partition_effects(w: &LabWorld) -> Result<EffectPartition, LecceError> {
    ensure_valid(w)?;
    let ideal: Vec<usize> = (0..w.registers.len()).filter(|&r| w.ideal[r]).collect();
    let same_ext = |a: usize, b: usize| {
        (0..w.labs.len()).all(|j| w.registered_yes(j, a) == w.registered_yes(j, b))
    };
    let same_freq = |a: usize, b: usize| {
        (0..w.preparers.len())
            .all(|pi| (0..w.labs.len()).all(|j| w.frequency(j, pi, a) == w.frequency(j, pi, b)))
    };
    let properties = classes(ideal.len(), |a, b| same_ext(ideal[a], ideal[b]))
        .into_iter()
        .enumerate()
        .map(|(id, idx)| {
            let members: Vec<usize> = idx.iter().map(|&i| ideal[i]).collect();
            let extensions = union_extensions(w, &members, |j, d| w.registered_yes(j, d));
            OperationalProperty {
                id,
                members,
                extensions,
            }
        })
        .collect();
    let mut frequency_only_pairs = Vec::new();
    for (i, &a) in ideal.iter().enumerate() {
        for &b in &ideal[i + 1..] {
            if same_freq(a, b) && !same_ext(a, b) {
                frequency_only_pairs.push((a, b));
            }
        }
    }
    Ok(EffectPartition {
        properties,
        frequency_only_pairs,
    })
}

/// The certainly-true domain of each state and the certainly-yes domain of
/// each property, by state and property id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertainlyDomains {
    pub certainly_true: Vec<Vec<usize>>,
    pub certainly_yes: Vec<Vec<usize>>,
}

fn subset(a: &[String], b: &[String]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

fn certainly(s: &OperationalState, e: &OperationalProperty) -> bool {
    s.extensions
        .iter()
        .zip(&e.extensions)
        .all(|(se, ee)| subset(se, ee))
}

pub fn certainly_domains(
    states: &[OperationalState],
    properties: &[OperationalProperty],
) -> CertainlyDomains {
    CertainlyDomains {
        certainly_true: states
            .iter()
            .map(|s| {
                properties
                    .iter()
                    .filter(|e| certainly(s, e))
                    .map(|e| e.id)
                    .collect()
            })
            .collect(),
        certainly_yes: properties
            .iter()
            .map(|e| {
                states
                    .iter()
                    .filter(|s| certainly(s, e))
                    .map(|s| s.id)
                    .collect()
            })
            .collect(),
    }
}

/// One lattice element: a class of properties sharing a certainly-yes domain,
/// or a synthetic bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LecceElement {
    pub yes_states: Vec<usize>,
    pub properties: Vec<usize>,
    pub synthetic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LecceBuild {
    pub states: Vec<OperationalState>,
    pub effects: EffectPartition,
    pub domains: CertainlyDomains,
    pub elements: Vec<LecceElement>,
    pub lattice: Option<FiniteLattice>,
    pub lattice_error: Option<LatticeError>,
    pub violations: Vec<Def1Violation>,
    /// Present only when the lattice exists and both actuality conditions hold.
    pub sps: Option<StatePropertySystem>,
}

/// Orders properties by inclusion of certainly-yes domains, merges equal
/// domains, adds a synthetic bottom and top where missing, and checks the
/// result as a state property system.
pub fn build_lecce_sps(w: &LabWorld) -> Result<LecceBuild, LecceError> {
    let states = partition_states(w)?;
    let effects = partition_effects(w)?;
    let domains = certainly_domains(&states, &effects.properties);

    let mut elements: Vec<LecceElement> = Vec::new();
    for (e, yes) in domains.certainly_yes.iter().enumerate() {
        match elements.iter_mut().find(|x| &x.yes_states == yes) {
            Some(x) => x.properties.push(e),
            None => elements.push(LecceElement {
                yes_states: yes.clone(),
                properties: vec![e],
                synthetic: false,
            }),
        }
    }
    let all: Vec<usize> = (0..states.len()).collect();
    if !elements.iter().any(|x| x.yes_states.is_empty()) {
        elements.insert(
            0,
            LecceElement {
                yes_states: Vec::new(),
                properties: Vec::new(),
                synthetic: true,
            },
        );
    }
    if !elements.iter().any(|x| x.yes_states == all) {
        elements.push(LecceElement {
            yes_states: all,
            properties: Vec::new(),
            synthetic: true,
        });
    }

    let n = elements.len();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b
                && elements[a]
                    .yes_states
                    .iter()
                    .all(|s| elements[b].yes_states.contains(s))
            {
                pairs.push((a, b));
            }
        }
    }
    let labels: Vec<String> = elements
        .iter()
        .map(|x| {
            if x.synthetic {
                String::from(if x.yes_states.is_empty() { "0" } else { "1" })
            } else {
                let names: Vec<&str> = x
                    .properties
                    .iter()
                    .flat_map(|&e| {
                        effects.properties[e]
                            .members
                            .iter()
                            .map(|&r| w.registers[r].as_str())
                    })
                    .collect();
                names.join("=")
            }
        })
        .collect();
    let lattice = FiniteLattice::from_order(n, &pairs).and_then(|l| l.with_labels(labels));
    let table: Vec<Vec<bool>> = states
        .iter()
        .map(|s| {
            elements
                .iter()
                .map(|x| x.yes_states.contains(&s.id))
                .collect()
        })
        .collect();

    let (lattice, lattice_error, violations, sps) = match lattice {
        Err(e) => (None, Some(e), Vec::new(), None),
        Ok(l) => {
            let violations = def1_violations(&l, &table);
            let sps = if violations.is_empty() {
                let labels: Vec<String> = states.iter().map(|s| state_label(w, s)).collect();
                let sps = StatePropertySystem::new(l.clone(), &table).expect("no violations");
                Some(sps.with_state_labels(labels).expect("one label per state"))
            } else {
                None
            };
            (Some(l), None, violations, sps)
        }
    };
    Ok(LecceBuild {
        states,
        effects,
        domains,
        elements,
        lattice,
        lattice_error,
        violations,
        sps,
    })
}

/// `{p1,p2}` from the preparing devices of `s`.
pub fn state_label(w: &LabWorld, s: &OperationalState) -> String {
    let names: Vec<&str> = s.members.iter().map(|&p| w.preparers[p].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartitionReport {
    /// `(lab, object, states)` for objects in more than one state extension.
    pub overlaps: Vec<(usize, String, Vec<usize>)>,
    /// `(lab, object, preparers)` for objects listed under several preparing devices.
    pub multiply_prepared: Vec<(usize, String, Vec<usize>)>,
    /// `(lab, object)` for objects in no state extension.
    pub orphans: Vec<(usize, String)>,
}

impl PartitionReport {
    pub fn holds(&self) -> bool {
        self.overlaps.is_empty() && self.multiply_prepared.is_empty() && self.orphans.is_empty()
    }
}

/// Whether the state extensions partition every lab's domain.
pub fn check_partition_property(w: &LabWorld, states: &[OperationalState]) -> PartitionReport {
    let mut report = PartitionReport::default();
    for j in 0..w.labs.len() {
        for name in w.domain(j) {
            let owners: Vec<usize> = states
                .iter()
                .filter(|s| {
                    s.extensions
                        .get(j)
                        .is_some_and(|e| e.binary_search_by(|x| x.as_str().cmp(name)).is_ok())
                })
                .map(|s| s.id)
                .collect();
            let preparers: BTreeSet<usize> = w.labs[j]
                .objects
                .iter()
                .filter(|o| o.name == name)
                .filter_map(|o| o.preparer)
                .collect();
            match owners.len() {
                0 => report.orphans.push((j, String::from(name))),
                1 => {}
                _ => report.overlaps.push((j, String::from(name), owners)),
            }
            if preparers.len() > 1 {
                report.multiply_prepared.push((
                    j,
                    String::from(name),
                    preparers.into_iter().collect(),
                ));
            }
        }
    }
    report
}
