//! In-memory form of a model file.

use std::fmt;

use subentity_core::hilbert::CMatrix;
use subentity_core::lecce::LabWorld;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Lattice,
    Sps,
    Hilbert,
    LabWorld,
    Compound,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Lattice,
        ModelKind::Sps,
        ModelKind::Hilbert,
        ModelKind::LabWorld,
        ModelKind::Compound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Lattice => "lattice",
            ModelKind::Sps => "sps",
            ModelKind::Hilbert => "hilbert",
            ModelKind::LabWorld => "labworld",
            ModelKind::Compound => "compound",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Meta {
    pub name: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    pub elements: Vec<String>,
    /// `(lower, upper)` pairs by element name.
    pub order: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpsSpec {
    pub lattice: LatticeSpec,
    pub states: Vec<String>,
    /// Actual properties of each state, in state order.
    pub actual: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixRole {
    Operator,
    Density,
    Projection,
    Unitary,
    Vector,
}

impl MatrixRole {
    pub const ALL: [MatrixRole; 5] = [
        MatrixRole::Operator,
        MatrixRole::Density,
        MatrixRole::Projection,
        MatrixRole::Unitary,
        MatrixRole::Vector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixRole::Operator => "operator",
            MatrixRole::Density => "density",
            MatrixRole::Projection => "projection",
            MatrixRole::Unitary => "unitary",
            MatrixRole::Vector => "vector",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedMatrix {
    pub name: String,
    pub role: MatrixRole,
    pub matrix: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HilbertSpec {
    /// One entry for a single space, two for `C^{d_a} ⊗ C^{d_b}`.
    pub dims: Vec<usize>,
    pub matrices: Vec<NamedMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompoundSpec {
    pub dims: (usize, usize),
    /// Matrix names of the whole-space states.
    pub whole: Vec<String>,
    /// Matrix names of the part-space properties.
    pub part_properties: Vec<String>,
    /// Explicit part states; when absent they are the reduced whole states.
    pub part_states: Option<Vec<String>>,
    /// `(label, relative path)` of documents whose matrices are imported.
    pub includes: Vec<(String, String)>,
    pub matrices: Vec<NamedMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Lattice(LatticeSpec),
    Sps(SpsSpec),
    Hilbert(HilbertSpec),
    LabWorld(LabWorld),
    Compound(CompoundSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelDocument {
    pub meta: Meta,
    pub body: Body,
}

impl ModelDocument {
    pub fn kind(&self) -> ModelKind {
        match self.body {
            Body::Lattice(_) => ModelKind::Lattice,
            Body::Sps(_) => ModelKind::Sps,
            Body::Hilbert(_) => ModelKind::Hilbert,
            Body::LabWorld(_) => ModelKind::LabWorld,
            Body::Compound(_) => ModelKind::Compound,
        }
    }
}
