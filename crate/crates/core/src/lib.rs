//! Executable operational quantum structures.
//!
//! * [`lattice`]: finite complete lattices, isomorphism and automorphism search.
//! * [`sps`]: finite state property systems and their quantum construction.
//! * [`axioms`]: the eight-axiom battery with witnesses and counterexamples.
//! * [`hilbert`]: finite-dimensional complex matrices, density operators,
//!   partial traces, Schmidt decompositions.
//! * [`subentity`]: subentity witnesses, exhaustive search, completed models.
//! * [`lecce`]: laboratory worlds and the state property systems they induce.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod axioms;
pub mod hilbert;
pub mod lattice;
pub mod lecce;
pub mod sps;
pub mod subentity;

/// Numerical tolerances shared by every floating-point check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Structural checks: Hermiticity, idempotence, actuality, rank cutoffs.
    pub eps: f64,
    /// Reconstructions: decompositions and sums of outer products.
    pub eps_recon: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        eps: 1e-9,
        eps_recon: 1e-8,
    };

    pub fn with_eps(eps: f64) -> Self {
        Tolerances {
            eps,
            ..Self::DEFAULT
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
