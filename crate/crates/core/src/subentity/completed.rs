use alloc::vec::Vec;

use super::{SubentityError, SubentityWitness};
use crate::hilbert::{born, partial_trace, DensityOperator, Factor, HilbertError, Projection};
use crate::sps::{quantum_sps, QuantumSps};
use crate::Tolerances;

/// Where a part property is placed in the compound space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    /// `P ⊗ I`, matching a trace over the right factor.
    LeftFactor,
    /// `I ⊗ P`.
    RightFactor,
}

impl Embedding {
    pub fn apply(self, p: &Projection, d_a: usize, d_b: usize) -> Projection {
        match self {
            Embedding::LeftFactor => p.tensor_identity(d_b),
            Embedding::RightFactor => p.identity_tensor(d_a),
        }
    }
}

/// Whole-space states together with part-space properties on `C^{d_a} ⊗ C^{d_b}`.
#[derive(Debug, Clone)]
pub struct CompletedQuantumModel {
    pub d_a: usize,
    pub d_b: usize,
    pub whole_states: Vec<DensityOperator>,
    pub part_properties: Vec<Projection>,
}

impl CompletedQuantumModel {
    pub fn new(
        d_a: usize,
        d_b: usize,
        whole_states: Vec<DensityOperator>,
        part_properties: Vec<Projection>,
    ) -> Result<Self, SubentityError> {
        let bad = |expected: usize, found: usize| -> SubentityError {
            HilbertError::DimensionMismatch { expected, found }.into()
        };
        if let Some(w) = whole_states.iter().find(|w| w.dim() != d_a * d_b) {
            return Err(bad(d_a * d_b, w.dim()));
        }
        if let Some(p) = part_properties.iter().find(|p| p.dim() != d_a) {
            return Err(bad(d_a, p.dim()));
        }
        Ok(CompletedQuantumModel {
            d_a,
            d_b,
            whole_states,
            part_properties,
        })
    }
}

/// Part and whole systems with the canonical witness between them.
#[derive(Debug, Clone)]
pub struct CompletedModel {
    pub part: QuantumSps,
    pub whole: QuantumSps,
    /// Distinct reduced states, in order of first appearance.
    pub part_states: Vec<DensityOperator>,
    pub witness: SubentityWitness,
}

/// Part system from `part_states` and `part_props`; whole system from
/// `whole_states` and the `P ⊗ I` image of every part lattice element, listed
/// in part lattice order so `whole.input_properties` is the embedding.
pub fn quantum_pair(
    d_a: usize,
    d_b: usize,
    whole_states: &[DensityOperator],
    part_states: &[DensityOperator],
    part_props: &[Projection],
    tol: &Tolerances,
) -> Result<(QuantumSps, QuantumSps), SubentityError> {
    let part = quantum_sps(d_a, part_states, part_props, tol)?;
    let embedded: Vec<Projection> = part
        .properties
        .iter()
        .map(|p| p.tensor_identity(d_b))
        .collect();
    let whole = quantum_sps(d_a * d_b, whole_states, &embedded, tol)?;
    Ok((part, whole))
}

/// Part states are the distinct reduced states of the whole states; `m` is
/// the partial trace and `n` is `P ↦ P ⊗ I`.
pub fn build_completed_model(
    model: &CompletedQuantumModel,
    tol: &Tolerances,
) -> Result<CompletedModel, SubentityError> {
    let mut part_states: Vec<DensityOperator> = Vec::new();
    let mut state_map = Vec::with_capacity(model.whole_states.len());
    for w in &model.whole_states {
        let reduced = partial_trace(w, model.d_a, model.d_b, Factor::A)?;
        let index = match part_states
            .iter()
            .position(|p| p.approx_eq(&reduced, tol.eps))
        {
            Some(i) => i,
            None => {
                part_states.push(reduced);
                part_states.len() - 1
            }
        };
        state_map.push(index);
    }
    let (part, whole) = quantum_pair(
        model.d_a,
        model.d_b,
        &model.whole_states,
        &part_states,
        &model.part_properties,
        tol,
    )?;
    let property_map = whole.input_properties.clone();
    Ok(CompletedModel {
        part,
        whole,
        part_states,
        witness: SubentityWitness {
            state_map,
            property_map,
        },
    })
}

/// `Tr(W'(P ⊗ I)) ≥ 1 - eps ⇔ Tr(Tr_B(W') P) ≥ 1 - eps` for every whole
/// state and part property.
pub fn canonical_witness_check(
    model: &CompletedQuantumModel,
    tol: &Tolerances,
) -> Result<bool, SubentityError> {
    covariance_check(model, Embedding::LeftFactor, tol)
}

/// The covariance test against the reduction over factor B, with part
/// properties placed by `embedding`.
pub fn covariance_check(
    model: &CompletedQuantumModel,
    embedding: Embedding,
    tol: &Tolerances,
) -> Result<bool, SubentityError> {
    let threshold = 1.0 - tol.eps;
    for w in &model.whole_states {
        let reduced = partial_trace(w, model.d_a, model.d_b, Factor::A)?;
        for p in &model.part_properties {
            let whole_actual = born(w, &embedding.apply(p, model.d_a, model.d_b))? >= threshold;
            let part_actual = born(&reduced, p)? >= threshold;
            if whole_actual != part_actual {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
