use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::hilbert::{DensityOperator, Projection, StateVector};
use crate::lattice::{gallery, FiniteLattice};
use crate::Tolerances;

const TOL: Tolerances = Tolerances::DEFAULT;

fn ket(amps: &[f64]) -> StateVector {
    StateVector::from_real(amps).unwrap()
}

fn qubit_kets() -> [StateVector; 4] {
    [
        ket(&[1.0, 0.0]),
        ket(&[0.0, 1.0]),
        ket(&[1.0, 1.0]),
        ket(&[1.0, -1.0]),
    ]
}

fn bell_whole_states() -> Vec<DensityOperator> {
    let [zero, one, plus, minus] = qubit_kets();
    let mut states: Vec<DensityOperator> = [&zero, &one, &plus, &minus]
        .iter()
        .map(|k| StateVector::product(k, &zero).density())
        .collect();
    states.push(ket(&[1.0, 0.0, 0.0, 1.0]).density());
    states
}

fn bell_pair(with_mixed: bool) -> (StatePropertySystem, StatePropertySystem) {
    let kets = qubit_kets();
    let mut part_states: Vec<DensityOperator> = kets.iter().map(StateVector::density).collect();
    if with_mixed {
        part_states.push(DensityOperator::maximally_mixed(2));
    }
    let props: Vec<Projection> = kets.iter().map(Projection::onto).collect();
    let (part, whole) =
        quantum_pair(2, 2, &bell_whole_states(), &part_states, &props, &TOL).unwrap();
    (part.sps, whole.sps)
}

/// Every injection `n` in lexicographic order, and for each every `m` in
/// lexicographic order, checked clause by clause.
fn naive_search(
    part: &StatePropertySystem,
    whole: &StatePropertySystem,
) -> Option<SubentityWitness> {
    fn injections(k: usize, of: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for x in 0..of {
            if !prefix.contains(&x) {
                prefix.push(x);
                injections(k, of, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut ns = Vec::new();
    injections(
        part.num_properties(),
        whole.num_properties(),
        &mut Vec::new(),
        &mut ns,
    );
    let (qs, ps) = (whole.num_states(), part.num_states());
    for n in ns {
        let mut m = vec![0; qs];
        loop {
            let w = SubentityWitness {
                state_map: m.clone(),
                property_map: n.clone(),
            };
            if verify_witness(part, whole, &w).unwrap().holds() {
                return Some(w);
            }
            let Some(i) = (0..qs).rev().find(|&i| m[i] + 1 < ps) else {
                break;
            };
            m[i] += 1;
            m[i + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }
    None
}

#[test]
fn identity_witness_on_self() {
    let sps = StatePropertySystem::atomic(gallery::mo(2));
    let id = SubentityWitness {
        state_map: (0..4).collect(),
        property_map: (0..6).collect(),
    };
    assert!(verify_witness(&sps, &sps, &id).unwrap().holds());
    let found = search_witness(&sps, &sps, 1_000_000).unwrap().unwrap();
    assert_eq!(found, id);
}

#[test]
fn constant_state_map_is_not_surjective() {
    let sps = StatePropertySystem::atomic(gallery::boolean_square());
    let w = SubentityWitness {
        state_map: vec![0, 0],
        property_map: (0..4).collect(),
    };
    let r = verify_witness(&sps, &sps, &w).unwrap();
    assert_eq!(
        r.violation,
        Some(WitnessViolation::NotSurjective { missed: 1 })
    );
    assert_eq!(r.violation.unwrap().clause(), Clause::Surjectivity);
}

#[test]
fn repeated_property_image_is_not_injective() {
    let sps = StatePropertySystem::atomic(gallery::boolean_square());
    let w = SubentityWitness {
        state_map: vec![0, 1],
        property_map: vec![0, 1, 1, 3],
    };
    let r = verify_witness(&sps, &sps, &w).unwrap();
    assert_eq!(
        r.violation,
        Some(WitnessViolation::NotInjective {
            a: 1,
            b: 2,
            image: 1
        })
    );
}

#[test]
fn covariance_violation_reported() {
    let sps = StatePropertySystem::atomic(gallery::boolean_square());
    let w = SubentityWitness {
        state_map: vec![1, 0],
        property_map: (0..4).collect(),
    };
    let r = verify_witness(&sps, &sps, &w).unwrap();
    assert_eq!(r.violation.unwrap().clause(), Clause::Covariance);
}

#[test]
fn domain_mismatch() {
    let sps = StatePropertySystem::atomic(gallery::boolean_square());
    let w = SubentityWitness {
        state_map: vec![0],
        property_map: (0..4).collect(),
    };
    assert_eq!(
        verify_witness(&sps, &sps, &w).unwrap_err(),
        SubentityError::DomainMismatch {
            map: "state map",
            expected: 2,
            found: 1
        }
    );
    let w = SubentityWitness {
        state_map: vec![0, 1],
        property_map: vec![0, 1, 2, 9],
    };
    assert!(matches!(
        verify_witness(&sps, &sps, &w),
        Err(SubentityError::CodomainMismatch { .. })
    ));
}

#[test]
fn product_model_reduction_is_a_witness() {
    let zero = ket(&[1.0, 0.0]);
    let one = ket(&[0.0, 1.0]);
    let whole_states = [
        StateVector::product(&zero, &zero).density(),
        StateVector::product(&one, &zero).density(),
    ];
    let part_states = [zero.density(), one.density()];
    let props = [Projection::onto(&zero), Projection::onto(&one)];
    let (part, whole) = quantum_pair(2, 2, &whole_states, &part_states, &props, &TOL).unwrap();
    let w = SubentityWitness {
        state_map: vec![0, 1],
        property_map: whole.input_properties.clone(),
    };
    assert!(verify_witness(&part.sps, &whole.sps, &w).unwrap().holds());
}

#[test]
fn bell_state_has_no_pure_image() {
    let (part, whole) = bell_pair(false);
    assert_eq!(search_witness(&part, &whole, u64::MAX).unwrap(), None);
    assert_eq!(naive_search(&part, &whole), None);
}

#[test]
fn mixed_part_state_serves_the_bell_state() {
    let (part, whole) = bell_pair(true);
    let w = search_witness(&part, &whole, u64::MAX).unwrap().unwrap();
    assert_eq!(w.state_map[4], 4);
    assert_eq!(naive_search(&part, &whole), Some(w));
}

#[test]
fn budget_exhaustion_is_distinct_and_reproducible() {
    let (part, whole) = bell_pair(false);
    let (_, stats) = search_witness_stats(&part, &whole, u64::MAX).unwrap();
    assert!(stats.nodes > 1);
    let budget = stats.nodes - 1;
    for _ in 0..2 {
        assert_eq!(
            search_witness(&part, &whole, budget).unwrap_err(),
            SubentityError::BudgetExhausted { budget }
        );
    }
    assert_eq!(search_witness(&part, &whole, stats.nodes).unwrap(), None);
}

fn bell_model() -> CompletedQuantumModel {
    let props = qubit_kets()[..2].iter().map(Projection::onto).collect();
    CompletedQuantumModel::new(2, 2, vec![ket(&[1.0, 0.0, 0.0, 1.0]).density()], props).unwrap()
}

#[test]
fn completed_bell_model() {
    let model = bell_model();
    let built = build_completed_model(&model, &TOL).unwrap();
    assert_eq!(built.part_states.len(), 1);
    assert!(built.part_states[0].approx_eq(&DensityOperator::maximally_mixed(2), 1e-12));
    assert!(
        verify_witness(&built.part.sps, &built.whole.sps, &built.witness)
            .unwrap()
            .holds()
    );
    assert!(canonical_witness_check(&model, &TOL).unwrap());
}

#[test]
fn completed_model_with_bell_and_product() {
    let zero = ket(&[1.0, 0.0]);
    let mut model = bell_model();
    model
        .whole_states
        .push(StateVector::product(&zero, &zero).density());
    let built = build_completed_model(&model, &TOL).unwrap();
    assert_eq!(built.witness.state_map, vec![0, 1]);
    assert!(built.part_states[1].approx_eq(&zero.density(), 1e-12));
    assert!(
        verify_witness(&built.part.sps, &built.whole.sps, &built.witness)
            .unwrap()
            .holds()
    );
}

#[test]
fn completed_product_model() {
    let [zero, one, plus, _] = qubit_kets();
    let states = vec![
        StateVector::product(&zero, &plus).density(),
        StateVector::product(&one, &zero).density(),
    ];
    let model = CompletedQuantumModel::new(2, 2, states, vec![Projection::onto(&zero)]).unwrap();
    let built = build_completed_model(&model, &TOL).unwrap();
    assert!(built.part_states.iter().all(|w| w.is_pure(1e-12)));
    assert!(
        verify_witness(&built.part.sps, &built.whole.sps, &built.witness)
            .unwrap()
            .holds()
    );
    assert!(canonical_witness_check(&model, &TOL).unwrap());
}

#[test]
fn wrong_factor_embedding_breaks_covariance() {
    let zero = ket(&[1.0, 0.0]);
    let skew = ket(&[(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()]);
    let state = StateVector::product(&zero, &skew).density();
    let model =
        CompletedQuantumModel::new(2, 2, vec![state], vec![Projection::onto(&zero)]).unwrap();
    assert!(covariance_check(&model, Embedding::LeftFactor, &TOL).unwrap());
    assert!(!covariance_check(&model, Embedding::RightFactor, &TOL).unwrap());
}

#[test]
fn model_dimension_checks() {
    let err = CompletedQuantumModel::new(2, 3, vec![DensityOperator::maximally_mixed(4)], vec![])
        .unwrap_err();
    assert!(matches!(err, SubentityError::Hilbert(_)));
}

#[test]
fn least_surjection_prefers_small_images() {
    use super::search::least_surjection;
    assert_eq!(
        least_surjection(&[vec![0, 1], vec![0, 1], vec![0]], 2),
        Some(vec![0, 1, 0])
    );
    assert_eq!(least_surjection(&[vec![0], vec![0]], 2), None);
    assert_eq!(
        least_surjection(&[vec![0, 1], vec![1]], 2),
        Some(vec![0, 1])
    );
}

fn small_lattice(i: usize) -> FiniteLattice {
    match i % 4 {
        0 => gallery::chain(2),
        1 => gallery::chain(3),
        2 => gallery::boolean_square(),
        _ => gallery::mo(2),
    }
}

/// One state per chosen non-bottom element, actual on its up-set.
fn principal_sps(lattice: FiniteLattice, picks: &[usize]) -> StatePropertySystem {
    let nonzero: Vec<usize> = (0..lattice.size())
        .filter(|&x| x != lattice.bottom())
        .collect();
    let sets: Vec<Vec<usize>> = picks
        .iter()
        .map(|&k| {
            let x = nonzero[k % nonzero.len()];
            (0..lattice.size()).filter(|&y| lattice.leq(x, y)).collect()
        })
        .collect();
    StatePropertySystem::from_actual_sets(lattice, &sets).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_agrees_with_naive_enumeration(
        lp in 0usize..4, lw in 0usize..4,
        part_picks in proptest::collection::vec(0usize..8, 1..4),
        whole_picks in proptest::collection::vec(0usize..8, 1..4),
    ) {
        let part = principal_sps(small_lattice(lp), &part_picks);
        let whole = principal_sps(small_lattice(lw), &whole_picks);
        let found = search_witness(&part, &whole, u64::MAX).unwrap();
        prop_assert_eq!(&found, &naive_search(&part, &whole));
        if let Some(w) = found {
            prop_assert!(verify_witness(&part, &whole, &w).unwrap().holds());
        }
    }

    #[test]
    fn valid_witness_implies_search_success(
        l in 0usize..4,
        part_picks in proptest::collection::vec(0usize..8, 1..4),
        extra in proptest::collection::vec(0usize..8, 0..3),
    ) {
        let part = principal_sps(small_lattice(l), &part_picks);
        let mut whole_picks = part_picks.clone();
        whole_picks.extend(extra.iter().map(|&e| part_picks[e % part_picks.len()]));
        let whole = principal_sps(small_lattice(l), &whole_picks);
        let m: Vec<usize> = (0..whole_picks.len()).map(|q| if q < part_picks.len() { q } else { part_picks.len() - 1 }).collect();
        let m: Vec<usize> = m.iter().enumerate().map(|(q, &p)| {
            if q < part_picks.len() { p } else { extra[q - part_picks.len()] % part_picks.len() }
        }).collect();
        let w = SubentityWitness { state_map: m, property_map: (0..part.num_properties()).collect() };
        prop_assert!(verify_witness(&part, &whole, &w).unwrap().holds());
        prop_assert!(covariant_setwise(&part, &whole, &w));
        prop_assert!(search_witness(&part, &whole, u64::MAX).unwrap().is_some());
    }

    #[test]
    fn clause_and_set_covariance_agree(
        l in 0usize..4,
        part_picks in proptest::collection::vec(0usize..8, 1..4),
        whole_picks in proptest::collection::vec(0usize..8, 2..5),
        m_seed in proptest::collection::vec(0usize..8, 5),
    ) {
        let part = principal_sps(small_lattice(l), &part_picks);
        let whole = principal_sps(small_lattice(l), &whole_picks);
        let m: Vec<usize> = (0..whole.num_states()).map(|q| m_seed[q] % part.num_states()).collect();
        prop_assume!((0..part.num_states()).all(|p| m.contains(&p)));
        let w = SubentityWitness { state_map: m, property_map: (0..part.num_properties()).collect() };
        let clause_level = !matches!(
            verify_witness(&part, &whole, &w).unwrap().violation,
            Some(WitnessViolation::Covariance { .. })
        );
        prop_assert_eq!(clause_level, covariant_setwise(&part, &whole, &w));
    }
}
