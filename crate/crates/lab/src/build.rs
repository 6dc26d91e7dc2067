//! Turning parsed documents into core objects.

use std::path::{Path, PathBuf};

use thiserror::Error;

use subentity_core::hilbert::{DensityOperator, HilbertError, Projection, StateVector};
use subentity_core::lattice::{FiniteLattice, LatticeError};
use subentity_core::sps::{SpsError, StatePropertySystem};
use subentity_core::Tolerances;

use crate::model::{
    Body, CompoundSpec, HilbertSpec, LatticeSpec, MatrixRole, ModelDocument, ModelKind,
    NamedMatrix, SpsSpec,
};
use crate::parse::{parse_model_with, ParseError};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("expected a {expected} document, found {found}")]
    WrongKind {
        expected: &'static str,
        found: ModelKind,
    },
    #[error("{0}")]
    Missing(String),
    #[error("matrix {name}: {source}")]
    Matrix { name: String, source: HilbertError },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Sps(#[from] SpsError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// A document together with the bytes it came from.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
    pub doc: ModelDocument,
}

pub fn load(path: &Path, tol: &Tolerances) -> Result<Loaded, BuildError> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| BuildError::Io {
        path: shown.clone(),
        message: e.to_string(),
    })?;
    let doc = parse_model_with(&bytes, tol).map_err(|source| BuildError::Parse {
        path: shown,
        source,
    })?;
    Ok(Loaded {
        path: path.to_path_buf(),
        bytes,
        doc,
    })
}

pub fn lattice_from_spec(spec: &LatticeSpec) -> Result<FiniteLattice, LatticeError> {
    let index = |name: &String| {
        spec.elements
            .iter()
            .position(|e| e == name)
            .expect("validated at parse time")
    };
    let pairs: Vec<(usize, usize)> = spec
        .order
        .iter()
        .map(|(a, b)| (index(a), index(b)))
        .collect();
    FiniteLattice::from_order(spec.elements.len(), &pairs)?
        .with_labels(spec.elements.iter().cloned())
}

/// Lattice and raw actuality table, before the actuality conditions are checked.
pub fn sps_table(spec: &SpsSpec) -> Result<(FiniteLattice, Vec<Vec<bool>>), LatticeError> {
    let lattice = lattice_from_spec(&spec.lattice)?;
    let table = spec
        .actual
        .iter()
        .map(|props| {
            (0..lattice.size())
                .map(|x| props.iter().any(|p| p == lattice.label(x)))
                .collect()
        })
        .collect();
    Ok((lattice, table))
}

pub fn sps_from_spec(spec: &SpsSpec) -> Result<StatePropertySystem, SpsError> {
    let (lattice, table) = sps_table(spec)?;
    StatePropertySystem::new(lattice, &table)?.with_state_labels(spec.states.iter().cloned())
}

/// A state property system from an `sps` document, or the atomic system of a
/// `lattice` document.
pub fn sps_from_doc(doc: &ModelDocument) -> Result<StatePropertySystem, BuildError> {
    match &doc.body {
        Body::Sps(s) => Ok(sps_from_spec(s)?),
        Body::Lattice(l) => Ok(StatePropertySystem::atomic(lattice_from_spec(l)?)),
        _ => Err(BuildError::WrongKind {
            expected: "lattice or sps",
            found: doc.kind(),
        }),
    }
}

pub fn hilbert_spec(doc: &ModelDocument) -> Result<&HilbertSpec, BuildError> {
    match &doc.body {
        Body::Hilbert(h) => Ok(h),
        _ => Err(BuildError::WrongKind {
            expected: "hilbert",
            found: doc.kind(),
        }),
    }
}

/// The two factor dimensions of a bipartite document.
pub fn bipartite_dims(h: &HilbertSpec) -> Result<(usize, usize), BuildError> {
    match h.dims[..] {
        [a, b] => Ok((a, b)),
        _ => Err(BuildError::Missing(
            "dims must list two factors for this command".to_string(),
        )),
    }
}

pub fn first_with_role<'a>(
    matrices: &'a [NamedMatrix],
    roles: &[MatrixRole],
) -> Result<&'a NamedMatrix, BuildError> {
    matrices
        .iter()
        .find(|m| roles.contains(&m.role))
        .ok_or_else(|| {
            let names: Vec<&str> = roles.iter().map(|r| r.name()).collect();
            BuildError::Missing(format!("no matrix with role {}", names.join(" or ")))
        })
}

pub fn vector_of(m: &NamedMatrix, tol: &Tolerances) -> Result<StateVector, BuildError> {
    StateVector::new(m.matrix.data().to_vec(), tol).map_err(|source| BuildError::Matrix {
        name: m.name.clone(),
        source,
    })
}

/// Density operators accept `density` and `vector` matrices.
pub fn density_of(m: &NamedMatrix, tol: &Tolerances) -> Result<DensityOperator, BuildError> {
    match m.role {
        MatrixRole::Vector => Ok(vector_of(m, tol)?.density()),
        _ => DensityOperator::new(m.matrix.clone(), tol).map_err(|source| BuildError::Matrix {
            name: m.name.clone(),
            source,
        }),
    }
}

pub fn projection_of(m: &NamedMatrix, tol: &Tolerances) -> Result<Projection, BuildError> {
    Projection::new(m.matrix.clone(), tol).map_err(|source| BuildError::Matrix {
        name: m.name.clone(),
        source,
    })
}

/// Operators of a compound document, with included matrices resolved relative to `base`.
#[derive(Debug, Clone)]
pub struct CompoundOperators {
    pub dims: (usize, usize),
    pub whole_names: Vec<String>,
    pub whole: Vec<DensityOperator>,
    pub part_property_names: Vec<String>,
    pub part_properties: Vec<Projection>,
    pub part_state_names: Option<Vec<String>>,
    pub part_states: Option<Vec<DensityOperator>>,
    /// Raw bytes of every included file, in include order.
    pub included: Vec<Vec<u8>>,
}

pub fn compound_operators(
    doc: &ModelDocument,
    base: &Path,
    tol: &Tolerances,
) -> Result<CompoundOperators, BuildError> {
    let Body::Compound(spec) = &doc.body else {
        return Err(BuildError::WrongKind {
            expected: "compound",
            found: doc.kind(),
        });
    };
    let (matrices, included) = gather_matrices(spec, base, tol)?;
    let find = |name: &String| {
        matrices
            .iter()
            .find(|m| &m.name == name)
            .ok_or_else(|| BuildError::Missing(format!("no matrix named {name}")))
    };
    let whole = spec
        .whole
        .iter()
        .map(|n| density_of(find(n)?, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let part_properties = spec
        .part_properties
        .iter()
        .map(|n| projection_of(find(n)?, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let part_states = match &spec.part_states {
        None => None,
        Some(names) => Some(
            names
                .iter()
                .map(|n| density_of(find(n)?, tol))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    Ok(CompoundOperators {
        dims: spec.dims,
        whole_names: spec.whole.clone(),
        whole,
        part_property_names: spec.part_properties.clone(),
        part_properties,
        part_state_names: spec.part_states.clone(),
        part_states,
        included,
    })
}

fn gather_matrices(
    spec: &CompoundSpec,
    base: &Path,
    tol: &Tolerances,
) -> Result<(Vec<NamedMatrix>, Vec<Vec<u8>>), BuildError> {
    let mut matrices = spec.matrices.clone();
    let mut included = Vec::new();
    for (_, rel) in &spec.includes {
        let loaded = load(&base.join(rel), tol)?;
        match loaded.doc.body {
            Body::Hilbert(h) => matrices.extend(h.matrices),
            Body::Compound(c) => matrices.extend(c.matrices),
            _ => {
                return Err(BuildError::WrongKind {
                    expected: "hilbert or compound",
                    found: loaded.doc.kind(),
                })
            }
        }
        included.push(loaded.bytes);
    }
    let mut names = std::collections::HashSet::new();
    if let Some(dup) = matrices.iter().find(|m| !names.insert(m.name.clone())) {
        return Err(BuildError::Missing(format!(
            "matrix {} defined more than once",
            dup.name
        )));
    }
    Ok((matrices, included))
}
