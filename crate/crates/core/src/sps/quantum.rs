use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{SpsError, StatePropertySystem};
use crate::hilbert::{born, DensityOperator, Projection};
use crate::lattice::FiniteLattice;
use crate::Tolerances;

/// A state property system read off density operators and projections,
/// together with the operator behind every lattice element.
#[derive(Debug, Clone)]
pub struct QuantumSps {
    pub sps: StatePropertySystem,
    /// Projection for each lattice element.
    pub properties: Vec<Projection>,
    /// Lattice element of each input projection.
    pub input_properties: Vec<usize>,
    /// Pairs of requested states with identical actual sets.
    pub duplicate_states: Vec<(usize, usize)>,
}

impl QuantumSps {
    /// Lattice element whose projection equals `p` within `eps`.
    pub fn element_of(&self, p: &Projection, eps: f64) -> Option<usize> {
        self.properties.iter().position(|q| q.approx_eq(p, eps))
    }
}

/// Builds the system whose properties are the meet closure of `prop_ops`
/// together with `0` and `I`, ordered by range inclusion, and where property
/// `P` is actual in state `W` iff `Tr(W P) >= 1 - eps`.
pub fn quantum_sps(
    dim: usize,
    state_ops: &[DensityOperator],
    prop_ops: &[Projection],
    tol: &Tolerances,
) -> Result<QuantumSps, SpsError> {
    for found in state_ops
        .iter()
        .map(DensityOperator::dim)
        .chain(prop_ops.iter().map(Projection::dim))
    {
        if found != dim {
            return Err(SpsError::DimensionMismatch {
                expected: dim,
                found,
            });
        }
    }

    let mut elements: Vec<Projection> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let push = |p: Projection,
                label: String,
                elements: &mut Vec<Projection>,
                labels: &mut Vec<String>|
     -> usize {
        if let Some(i) = elements.iter().position(|q| q.approx_eq(&p, tol.eps)) {
            return i;
        }
        elements.push(p);
        labels.push(label);
        elements.len() - 1
    };

    push(
        Projection::zero(dim),
        String::from("0"),
        &mut elements,
        &mut labels,
    );
    let input_properties: Vec<usize> = prop_ops
        .iter()
        .enumerate()
        .map(|(i, p)| push(p.clone(), format!("P{i}"), &mut elements, &mut labels))
        .collect();
    push(
        Projection::identity(dim),
        String::from("I"),
        &mut elements,
        &mut labels,
    );

    // Close under range intersection.
    let mut checked = 0;
    while checked < elements.len() {
        let j = checked;
        for i in 0..j {
            let m = elements[i].meet(&elements[j], tol.eps);
            let label = format!("({} & {})", labels[i], labels[j]);
            push(m, label, &mut elements, &mut labels);
        }
        checked += 1;
    }

    let n = elements.len();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && elements[a].range_within(&elements[b], tol.eps) {
                pairs.push((a, b));
            }
        }
    }
    let lattice = FiniteLattice::from_order(n, &pairs)?.with_labels(labels)?;

    let mut table = Vec::with_capacity(state_ops.len());
    for w in state_ops {
        let row = elements
            .iter()
            .map(|p| born(w, p).map(|v| v >= 1.0 - tol.eps))
            .collect::<Result<Vec<bool>, _>>()?;
        table.push(row);
    }
    let mut duplicate_states = Vec::new();
    for p in 0..table.len() {
        for q in (p + 1)..table.len() {
            if table[p] == table[q] {
                duplicate_states.push((p, q));
            }
        }
    }
    let sps = StatePropertySystem::new(lattice, &table)?;
    Ok(QuantumSps {
        sps,
        properties: elements,
        input_properties,
        duplicate_states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{CMatrix, StateVector, C64};
    use alloc::vec;

    const TOL: Tolerances = Tolerances::DEFAULT;

    fn ket(amps: &[f64]) -> StateVector {
        StateVector::from_real(amps).unwrap()
    }

    #[test]
    fn eigenstate_makes_its_projection_actual() {
        let zero = ket(&[1.0, 0.0]);
        let q = quantum_sps(2, &[zero.density()], &[Projection::onto(&zero)], &TOL).unwrap();
        let p0 = q.input_properties[0];
        let id = q.sps.lattice().top();
        assert_eq!(q.sps.xi(0), {
            let mut v = vec![p0, id];
            v.sort();
            v
        });
        assert_eq!(q.sps.lattice().size(), 3);
    }

    #[test]
    fn superposition_leaves_basis_property_potential() {
        let plus = ket(&[1.0, 1.0]);
        let zero = ket(&[1.0, 0.0]);
        let q = quantum_sps(2, &[plus.density()], &[Projection::onto(&zero)], &TOL).unwrap();
        assert!(!q.sps.is_actual(0, q.input_properties[0]));
    }

    #[test]
    fn bell_state_leaves_local_property_potential() {
        let bell = ket(&[1.0, 0.0, 0.0, 1.0]);
        let local = Projection::onto(&ket(&[1.0, 0.0])).tensor_identity(2);
        let q = quantum_sps(4, &[bell.density()], &[local], &TOL).unwrap();
        assert!(!q.sps.is_actual(0, q.input_properties[0]));
        assert_eq!(q.sps.xi(0), vec![q.sps.lattice().top()]);
    }

    #[test]
    fn meets_are_added_and_duplicates_removed() {
        // Two planes in C^3 meeting in the x axis; one repeated.
        let plane_xy = Projection::new(CMatrix::diag(&[1.0, 1.0, 0.0]), &TOL).unwrap();
        let plane_xz = Projection::new(CMatrix::diag(&[1.0, 0.0, 1.0]), &TOL).unwrap();
        let q = quantum_sps(3, &[], &[plane_xy.clone(), plane_xz, plane_xy], &TOL).unwrap();
        // 0, xy, xz, I, x
        assert_eq!(q.sps.lattice().size(), 5);
        assert_eq!(q.input_properties[0], q.input_properties[2]);
        let x_axis = Projection::onto(&ket(&[1.0, 0.0, 0.0]));
        assert!(q.element_of(&x_axis, 1e-12).is_some());
    }

    #[test]
    fn duplicate_states_reported() {
        let zero = ket(&[1.0, 0.0]);
        let one = ket(&[0.0, 1.0]);
        let q = quantum_sps(2, &[zero.density(), one.density()], &[], &TOL).unwrap();
        assert_eq!(q.duplicate_states, vec![(0, 1)]);
    }

    #[test]
    fn dimension_mismatch() {
        let err = quantum_sps(2, &[DensityOperator::maximally_mixed(3)], &[], &TOL).unwrap_err();
        assert_eq!(
            err,
            SpsError::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn actuality_agrees_with_exact_range_criterion() {
        // Rational operators on C^3; exact criterion: every eigenvector of W with
        // positive weight is fixed by P.
        let states = [
            CMatrix::diag(&[0.5, 0.5, 0.0]),
            CMatrix::diag(&[1.0, 0.0, 0.0]),
            CMatrix::diag(&[0.25, 0.25, 0.5]),
            CMatrix::from_fn(3, 3, |i, j| {
                if i < 2 && j < 2 {
                    C64::new(0.5, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        ];
        let props = [
            CMatrix::diag(&[1.0, 1.0, 0.0]),
            CMatrix::diag(&[1.0, 0.0, 0.0]),
            CMatrix::diag(&[0.0, 0.0, 1.0]),
            CMatrix::from_fn(3, 3, |i, j| {
                if i < 2 && j < 2 {
                    C64::new(0.5, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        ];
        let states: Vec<DensityOperator> = states
            .into_iter()
            .map(|m| DensityOperator::new(m, &TOL).unwrap())
            .collect();
        let props: Vec<Projection> = props
            .into_iter()
            .map(|m| Projection::new(m, &TOL).unwrap())
            .collect();
        let q = quantum_sps(3, &states, &props, &TOL).unwrap();
        for (s, w) in states.iter().enumerate() {
            let e = crate::hilbert::hermitian_eigen(w.matrix(), 1e-12);
            for (i, p) in props.iter().enumerate() {
                let exact = e
                    .values
                    .iter()
                    .zip(&e.vectors)
                    .filter(|(v, _)| **v > 1e-12)
                    .all(|(_, u)| {
                        p.matrix()
                            .mul_vec(u)
                            .iter()
                            .zip(u)
                            .all(|(a, b)| (a - b).norm() < 1e-12)
                    });
                assert_eq!(
                    q.sps.is_actual(s, q.input_properties[i]),
                    exact,
                    "state {s} prop {i}"
                );
                let fixed = p.matrix().mul(w.matrix()).max_abs_diff(w.matrix()) < 1e-12;
                assert_eq!(fixed, exact);
            }
        }
    }
}
