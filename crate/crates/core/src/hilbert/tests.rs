use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sample::*;
use super::*;

const TOL: Tolerances = Tolerances::DEFAULT;

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn bell() -> StateVector {
    StateVector::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap()
}

fn third_two_thirds() -> StateVector {
    StateVector::from_real(&[libm::sqrt(1.0 / 3.0), 0.0, 0.0, libm::sqrt(2.0 / 3.0)]).unwrap()
}

fn ket(bits: &[f64]) -> StateVector {
    StateVector::from_real(bits).unwrap()
}

fn cnot() -> CMatrix {
    let mut u = CMatrix::zeros(4, 4);
    u[(0, 0)] = r(1.0);
    u[(1, 1)] = r(1.0);
    u[(2, 3)] = r(1.0);
    u[(3, 2)] = r(1.0);
    u
}

#[test]
fn partial_trace_of_product_state() {
    let w = StateVector::product(&ket(&[1.0, 0.0]), &ket(&[1.0, 0.0])).density();
    let reduced = partial_trace(&w, 2, 2, Factor::A).unwrap();
    assert!(reduced.matrix().max_abs_diff(&CMatrix::diag(&[1.0, 0.0])) < 1e-15);
}

#[test]
fn partial_trace_of_bell_is_maximally_mixed() {
    for keep in [Factor::A, Factor::B] {
        let reduced = partial_trace(&bell().density(), 2, 2, keep).unwrap();
        assert!(reduced.approx_eq(&DensityOperator::maximally_mixed(2), 1e-15));
    }
}

#[test]
fn partial_trace_of_weighted_entangled_state() {
    // W_1 = Σ p_i |φ_i><φ_i| with p = (1/3, 2/3) on the computational basis.
    let reduced = partial_trace(&third_two_thirds().density(), 2, 2, Factor::A).unwrap();
    assert!(
        reduced
            .matrix()
            .max_abs_diff(&CMatrix::diag(&[1.0 / 3.0, 2.0 / 3.0]))
            < 1e-15
    );
}

#[test]
fn partial_trace_dimension_mismatch() {
    let w = DensityOperator::maximally_mixed(4);
    assert_eq!(
        partial_trace(&w, 2, 3, Factor::A).unwrap_err(),
        HilbertError::DimensionMismatch {
            expected: 6,
            found: 4
        }
    );
}

#[test]
fn partial_trace_keeps_right_factor() {
    // |0><0| ⊗ diag(0.25, 0.75) traced over A.
    let w = DensityOperator::new(
        CMatrix::diag(&[1.0, 0.0]).kron(&CMatrix::diag(&[0.25, 0.75])),
        &TOL,
    )
    .unwrap();
    let reduced = partial_trace(&w, 2, 2, Factor::B).unwrap();
    assert!(reduced.matrix().max_abs_diff(&CMatrix::diag(&[0.25, 0.75])) < 1e-15);
}

#[test]
fn schmidt_of_product() {
    let plus = ket(&[1.0, 1.0]);
    let psi = StateVector::product(&plus, &ket(&[1.0, 0.0]));
    let form = schmidt(&psi, 2, 2, &TOL).unwrap();
    assert_eq!(form.rank(), 1);
    assert!((form.coefficients[0] - 1.0).abs() < 1e-15);
    assert!((phase_overlap(&form.reconstruct(), psi.amplitudes()) - 1.0).abs() < 1e-12);
}

#[test]
fn schmidt_of_bell() {
    let form = schmidt(&bell(), 2, 2, &TOL).unwrap();
    assert_eq!(form.rank(), 2);
    for c in &form.coefficients {
        assert!((c - libm::sqrt(0.5)).abs() < 1e-15);
    }
}

#[test]
fn schmidt_of_weighted_state() {
    // Singular values of [[√(1/3), 0], [0, √(2/3)]].
    let form = schmidt(&third_two_thirds(), 2, 2, &TOL).unwrap();
    assert!((form.coefficients[0] - libm::sqrt(2.0 / 3.0)).abs() < 1e-15);
    assert!((form.coefficients[1] - libm::sqrt(1.0 / 3.0)).abs() < 1e-15);
    let rebuilt = form.reconstruct();
    assert!((phase_overlap(&rebuilt, third_two_thirds().amplitudes()) - 1.0).abs() < 1e-12);
}

#[test]
fn schmidt_errors() {
    assert!(matches!(
        schmidt(&bell(), 3, 2, &TOL),
        Err(HilbertError::DimensionMismatch { .. })
    ));
    let unnormalized = StateVector::normalized(vec![r(1.0); 4]).unwrap();
    assert!(schmidt(&unnormalized, 2, 2, &TOL).is_ok());
    let bad = StateVector::new(vec![r(1.0), r(1.0), r(0.0), r(0.0)], &TOL);
    assert!(matches!(bad, Err(HilbertError::NormViolation { .. })));
}

#[test]
fn entanglement_detection() {
    let zero_one = StateVector::product(&ket(&[1.0, 0.0]), &ket(&[0.0, 1.0]));
    assert!(!is_entangled(&zero_one, 2, 2, &TOL).unwrap());
    assert!(is_entangled(&bell(), 2, 2, &TOL).unwrap());
    let slight = ket(&[libm::sqrt(0.999), 0.0, 0.0, libm::sqrt(0.001)]);
    assert!(is_entangled(&slight, 2, 2, &TOL).unwrap());
    let form = schmidt(&slight, 2, 2, &TOL).unwrap();
    assert!((form.coefficients[1] - libm::sqrt(0.001)).abs() < 1e-15);
}

#[test]
fn eigendecomposition_examples() {
    let pure = ket(&[1.0, 0.0]).density();
    let terms = eigendecomposition(&pure, &TOL);
    assert_eq!(terms.len(), 1);
    assert!((terms[0].0 - 1.0).abs() < 1e-15);
    assert_eq!(terms[0].1, vec![r(1.0), r(0.0)]);

    let mixed = DensityOperator::maximally_mixed(2);
    let terms = eigendecomposition(&mixed, &TOL);
    assert_eq!(terms.len(), 2);
    for (w, _) in &terms {
        assert!((w - 0.5).abs() < 1e-15);
    }
    assert!(inner(&terms[0].1, &terms[1].1).norm() < 1e-15);

    let diag = DensityOperator::new(CMatrix::diag(&[1.0 / 3.0, 2.0 / 3.0]), &TOL).unwrap();
    let terms = eigendecomposition(&diag, &TOL);
    assert!((terms[0].0 - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(terms[0].1, vec![r(0.0), r(1.0)]);
    assert!((terms[1].0 - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(terms[1].1, vec![r(1.0), r(0.0)]);
}

#[test]
fn density_operator_validation() {
    let not_hermitian = CMatrix::new(2, 2, vec![r(0.5), r(0.1), r(0.0), r(0.5)]).unwrap();
    assert_eq!(
        DensityOperator::new(not_hermitian, &TOL),
        Err(HilbertError::NotHermitian)
    );
    assert!(matches!(
        DensityOperator::new(CMatrix::diag(&[1.5, -0.5]), &TOL),
        Err(HilbertError::NotPositive { .. })
    ));
    assert!(matches!(
        DensityOperator::new(CMatrix::diag(&[0.5, 0.4]), &TOL),
        Err(HilbertError::TraceNotOne { .. })
    ));
}

#[test]
fn projection_validation_and_meet() {
    assert!(Projection::new(CMatrix::diag(&[1.0, 0.5]), &TOL).is_err());
    let p0 = Projection::onto(&ket(&[1.0, 0.0, 0.0]));
    let plane = Projection::new(CMatrix::diag(&[1.0, 1.0, 0.0]), &TOL).unwrap();
    assert_eq!(plane.rank(), 2);
    assert!(p0.range_within(&plane, 1e-12));
    assert!(!plane.range_within(&p0, 1e-12));
    // Two planes in C^3 meet in a line.
    let other = Projection::onto_span(
        3,
        &[vec![r(1.0), r(0.0), r(0.0)], vec![r(0.0), r(1.0), r(1.0)]],
    );
    let meet = plane.meet(&other, 1e-9);
    assert_eq!(meet.rank(), 1);
    assert!(meet.approx_eq(&p0, 1e-12));
    let plus = Projection::onto(&ket(&[1.0, 1.0]));
    let zero = Projection::onto(&ket(&[1.0, 0.0]));
    assert_eq!(plus.meet(&zero, 1e-9).rank(), 0);
}

#[test]
fn decompositions_of_pure_state() {
    let psi = ket(&[0.6, 0.8]);
    let samples = decompositions_sample(&psi.density(), 1, 3, 7, &TOL).unwrap();
    for s in samples {
        assert_eq!(s.terms.len(), 1);
        assert!((s.terms[0].0 - 1.0).abs() < 1e-14);
        assert!((phase_overlap(&s.terms[0].1, psi.amplitudes()) - 1.0).abs() < 1e-14);
    }
}

#[test]
fn decompositions_of_maximally_mixed_qubit() {
    let w = DensityOperator::maximally_mixed(2);
    for seed in 0..5 {
        let samples = decompositions_sample(&w, 2, 2, seed, &TOL).unwrap();
        for s in samples {
            assert!(s.reconstruct().max_abs_diff(w.matrix()) <= TOL.eps_recon);
        }
    }
}

#[test]
fn three_term_decomposition_reconstructs() {
    let w = DensityOperator::new(CMatrix::diag(&[1.0 / 3.0, 2.0 / 3.0]), &TOL).unwrap();
    let samples = decompositions_sample(&w, 3, 4, 1, &TOL).unwrap();
    for s in &samples {
        assert_eq!(s.terms.len(), 3);
        assert!(s.terms.iter().all(|(q, _)| *q > 0.0));
        let total: f64 = s.terms.iter().map(|t| t.0).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(s.reconstruct().max_abs_diff(w.matrix()) <= TOL.eps_recon);
    }
    let again = decompositions_sample(&w, 3, 4, 1, &TOL).unwrap();
    assert_eq!(samples[0].terms, again[0].terms);
}

#[test]
fn decomposition_rejects_too_few_parts() {
    let w = DensityOperator::maximally_mixed(3);
    assert_eq!(
        decompositions_sample(&w, 2, 1, 0, &TOL).unwrap_err(),
        HilbertError::PartsBelowRank { parts: 2, rank: 3 }
    );
}

#[test]
fn born_values() {
    let w = third_two_thirds().density();
    assert!((born(&w, &Projection::identity(4)).unwrap() - 1.0).abs() < 1e-15);
    let p0 = Projection::onto(&ket(&[1.0, 0.0]));
    let half = born(&bell().density(), &p0.tensor_identity(2)).unwrap();
    assert!((half - 0.5).abs() < 1e-15);
    let p1 = Projection::onto(&ket(&[0.0, 1.0]));
    assert_eq!(born(&ket(&[1.0, 0.0]).density(), &p1).unwrap(), 0.0);
    assert!(born(&w, &p0).is_err());
}

#[test]
fn range_preorder_examples() {
    let w = third_two_thirds().density();
    assert!(range_preorder(&w, &w, &TOL).unwrap());
    let pure = ket(&[1.0, 0.0]).density();
    let mixed = DensityOperator::maximally_mixed(2);
    assert!(range_preorder(&pure, &mixed, &TOL).unwrap());
    assert!(!range_preorder(&mixed, &pure, &TOL).unwrap());
    let half_half = DensityOperator::new(CMatrix::diag(&[0.5, 0.5, 0.0]), &TOL).unwrap();
    let thirds = DensityOperator::maximally_mixed(3);
    assert!(range_preorder(&half_half, &thirds, &TOL).unwrap());
    assert!(!range_preorder(&thirds, &half_half, &TOL).unwrap());
}

#[test]
fn controlled_flip_entangles() {
    let psi0 = StateVector::product(&ket(&[1.0, 1.0]), &ket(&[1.0, 0.0]));
    let change = reduced_evolution(&psi0, &cnot(), 2, 2, &TOL).unwrap();
    assert!((change.before - 1.0).abs() < 1e-12);
    assert!((change.after - 0.5).abs() < 1e-12);
    let same = reduced_evolution(&psi0, &CMatrix::identity(4), 2, 2, &TOL).unwrap();
    assert!((same.before - same.after).abs() < 1e-15);
}

#[test]
fn reduced_evolution_rejects_non_unitary() {
    let psi0 = bell();
    let u = CMatrix::diag(&[1.0, 1.0, 1.0, 0.5]);
    assert_eq!(
        reduced_evolution(&psi0, &u, 2, 2, &TOL).unwrap_err(),
        HilbertError::NotUnitary
    );
    assert!(matches!(
        reduced_evolution(&psi0, &CMatrix::identity(3), 2, 2, &TOL),
        Err(HilbertError::DimensionMismatch { .. })
    ));
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn min_eigenvalue(m: &CMatrix) -> f64 {
    *hermitian_eigen(m, 1e-9).values.last().unwrap()
}

proptest! {
    #[test]
    fn partial_trace_preserves_density_invariants(seed in any::<u64>(), d_a in 1usize..4, d_b in 1usize..4, keep_a in any::<bool>()) {
        let mut g = rng(seed);
        let w = random_density(&mut g, d_a * d_b, 1 + (seed as usize % (d_a * d_b)));
        let keep = if keep_a { Factor::A } else { Factor::B };
        let reduced = partial_trace(&w, d_a, d_b, keep).unwrap();
        prop_assert!((reduced.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(reduced.matrix().is_hermitian(1e-14));
        prop_assert!(min_eigenvalue(reduced.matrix()) >= -1e-9);
    }

    #[test]
    fn covariance_identity(seed in any::<u64>(), d_a in 1usize..4, d_b in 1usize..4) {
        let mut g = rng(seed);
        let w = random_density(&mut g, d_a * d_b, d_a * d_b);
        let rank = (seed as usize) % (d_a + 1);
        let p = random_projection(&mut g, d_a, rank);
        let lhs = born(&w, &p.tensor_identity(d_b)).unwrap();
        let rhs = born(&partial_trace(&w, d_a, d_b, Factor::A).unwrap(), &p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn schmidt_weights_are_reduced_spectrum(seed in any::<u64>(), d_a in 1usize..5, d_b in 1usize..5) {
        let mut g = rng(seed);
        let psi = random_state_vector(&mut g, d_a * d_b);
        let form = schmidt(&psi, d_a, d_b, &TOL).unwrap();
        let reduced = partial_trace(&psi.density(), d_a, d_b, Factor::A).unwrap();
        let spectrum = hermitian_eigen(reduced.matrix(), 1e-9).values;
        let mut weights = form.weights();
        weights.resize(spectrum.len(), 0.0);
        for (w, e) in weights.iter().zip(&spectrum) {
            prop_assert!((w - e).abs() <= 1e-9);
        }
        let rebuilt = form.reconstruct();
        let err = rebuilt.iter().zip(psi.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-8);
    }

    #[test]
    fn purity_detects_entanglement(seed in any::<u64>(), product in any::<bool>()) {
        let mut g = rng(seed);
        let psi = if product {
            StateVector::product(&random_state_vector(&mut g, 2), &random_state_vector(&mut g, 3))
        } else {
            random_state_vector(&mut g, 6)
        };
        let reduced = partial_trace(&psi.density(), 2, 3, Factor::A).unwrap();
        prop_assert_eq!(reduced.is_pure(TOL.eps), !is_entangled(&psi, 2, 3, &TOL).unwrap());
    }

    #[test]
    fn product_unitaries_preserve_reduced_purity(seed in any::<u64>()) {
        let mut g = rng(seed);
        let psi = random_state_vector(&mut g, 6);
        let u = random_unitary(&mut g, 2).kron(&random_unitary(&mut g, 3));
        let change = reduced_evolution(&psi, &u, 2, 3, &TOL).unwrap();
        prop_assert!((change.before - change.after).abs() <= 1e-9);
    }

    #[test]
    fn every_sample_reconstructs(seed in any::<u64>(), dim in 2usize..5, extra in 0usize..3) {
        let mut g = rng(seed);
        let rank = 1 + (seed as usize % dim);
        let w = random_density(&mut g, dim, rank);
        let parts = rank + extra;
        for s in decompositions_sample(&w, parts, 3, seed, &TOL).unwrap() {
            prop_assert!(s.reconstruct().max_abs_diff(w.matrix()) <= TOL.eps_recon);
        }
    }

    #[test]
    fn exact_actuality_matches_range_containment(seed in any::<u64>()) {
        // Tr(W P) = 1 exactly when every eigenvector of W with positive weight lies in range(P).
        let mut g = rng(seed);
        let p = random_projection(&mut g, 3, 2);
        let inside = p.meet(&p, 1e-9);
        let psi: Vec<C64> = inside.matrix().mul_vec(random_state_vector(&mut g, 3).amplitudes());
        let psi = StateVector::normalized(psi).unwrap();
        prop_assert!((born(&psi.density(), &p).unwrap() - 1.0).abs() < 1e-9);
        let outside = random_state_vector(&mut g, 3);
        let in_range = p.matrix().mul_vec(outside.amplitudes()).iter().zip(outside.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-9);
        prop_assert_eq!(born(&outside.density(), &p).unwrap() >= 1.0 - 1e-9, in_range);
    }
}
