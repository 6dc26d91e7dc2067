//! Subentity witnesses between a part and a whole state property system.
//!
//! A witness is a pair `(m, n)`: `m` sends whole states onto part states and
//! must be surjective, `n` sends part properties into whole properties and
//! must be injective, and the two must be covariant:
//! `a ∈ ξ(m(p')) ⇔ n(a) ∈ ξ'(p')`.
//!
//! Nothing forces `n` to send the part's bottom and top to the whole's
//! bottom and top; covariance alone constrains their actuality.

mod completed;
mod search;

use alloc::vec::Vec;

use thiserror::Error;

use crate::hilbert::HilbertError;
use crate::sps::{SpsError, StatePropertySystem};

pub use completed::{
    build_completed_model, canonical_witness_check, covariance_check, quantum_pair, CompletedModel,
    CompletedQuantumModel, Embedding,
};
pub use search::{search_witness, search_witness_stats, SearchStats};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubentityWitness {
    /// `m`: image of every whole state.
    pub state_map: Vec<usize>,
    /// `n`: image of every part property.
    pub property_map: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    Surjectivity,
    Injectivity,
    Covariance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessViolation {
    /// Part state outside the image of `m`.
    NotSurjective { missed: usize },
    /// Two part properties with the same image.
    NotInjective { a: usize, b: usize, image: usize },
    /// `a ∈ ξ(m(p'))` and `n(a) ∈ ξ'(p')` disagree.
    Covariance {
        whole_state: usize,
        part_property: usize,
        part_actual: bool,
        whole_actual: bool,
    },
}

impl WitnessViolation {
    pub fn clause(&self) -> Clause {
        match self {
            WitnessViolation::NotSurjective { .. } => Clause::Surjectivity,
            WitnessViolation::NotInjective { .. } => Clause::Injectivity,
            WitnessViolation::Covariance { .. } => Clause::Covariance,
        }
    }
}

/// Outcome of [`verify_witness`]: the first violated clause, if any, in the
/// order surjectivity, injectivity, covariance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub violation: Option<WitnessViolation>,
}

impl WitnessReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubentityError {
    #[error("{map} has {found} entries, expected {expected}")]
    DomainMismatch {
        map: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{map} sends {index} to {value}, outside a codomain of size {size}")]
    CodomainMismatch {
        map: &'static str,
        index: usize,
        value: usize,
        size: usize,
    },
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("no whole property equals the embedding of part property {property}")]
    MissingEmbedding { property: usize },
    #[error(transparent)]
    Sps(#[from] SpsError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

fn check_map(
    map: &'static str,
    values: &[usize],
    expected: usize,
    size: usize,
) -> Result<(), SubentityError> {
    if values.len() != expected {
        return Err(SubentityError::DomainMismatch {
            map,
            expected,
            found: values.len(),
        });
    }
    match values.iter().enumerate().find(|(_, &v)| v >= size) {
        Some((index, &value)) => Err(SubentityError::CodomainMismatch {
            map,
            index,
            value,
            size,
        }),
        None => Ok(()),
    }
}

/// Checks surjectivity, injectivity and covariance in that order.
pub fn verify_witness(
    part: &StatePropertySystem,
    whole: &StatePropertySystem,
    w: &SubentityWitness,
) -> Result<WitnessReport, SubentityError> {
    check_map(
        "state map",
        &w.state_map,
        whole.num_states(),
        part.num_states(),
    )?;
    check_map(
        "property map",
        &w.property_map,
        part.num_properties(),
        whole.num_properties(),
    )?;

    let mut hit = alloc::vec![false; part.num_states()];
    for &p in &w.state_map {
        hit[p] = true;
    }
    if let Some(missed) = hit.iter().position(|h| !h) {
        return Ok(WitnessReport {
            violation: Some(WitnessViolation::NotSurjective { missed }),
        });
    }

    let n = &w.property_map;
    for a in 0..n.len() {
        if let Some(b) = ((a + 1)..n.len()).find(|&b| n[a] == n[b]) {
            return Ok(WitnessReport {
                violation: Some(WitnessViolation::NotInjective { a, b, image: n[a] }),
            });
        }
    }

    for (whole_state, &p) in w.state_map.iter().enumerate() {
        for (part_property, &image) in n.iter().enumerate() {
            let part_actual = part.is_actual(p, part_property);
            let whole_actual = whole.is_actual(whole_state, image);
            if part_actual != whole_actual {
                let violation = WitnessViolation::Covariance {
                    whole_state,
                    part_property,
                    part_actual,
                    whole_actual,
                };
                return Ok(WitnessReport {
                    violation: Some(violation),
                });
            }
        }
    }
    Ok(WitnessReport { violation: None })
}

/// `n⁻¹(ξ'(p'))` as an actuality row over part properties.
pub fn pulled_back_row(
    whole: &StatePropertySystem,
    property_map: &[usize],
    whole_state: usize,
) -> Vec<bool> {
    property_map
        .iter()
        .map(|&image| whole.is_actual(whole_state, image))
        .collect()
}

/// Covariance restated on sets: `ξ(m(p')) = n⁻¹(ξ'(p'))` for every `p'`.
pub fn covariant_setwise(
    part: &StatePropertySystem,
    whole: &StatePropertySystem,
    w: &SubentityWitness,
) -> bool {
    w.state_map
        .iter()
        .enumerate()
        .all(|(q, &p)| part.xi_row(p) == pulled_back_row(whole, &w.property_map, q).as_slice())
}

#[cfg(test)]
mod tests;
