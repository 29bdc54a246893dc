//! Harmonic analysis for finite quantum groups.
//!
//! Finite quantum groups, their actions on finite-dimensional
//! C*-algebras and the Markov operators induced by states are encoded as
//! complex structure tensors. The crate decides ergodicity,
//! non-degeneracy and the Choquet–Deny property numerically, computes
//! harmonic spaces, and checks the structural theorems relating them.
//!
//! The crate is `no_std` with `alloc`.

#![no_std]

extern crate alloc;

pub mod actions;
pub mod algebra;
pub mod error;
pub mod groups;
pub mod harmonic;
pub mod hopf;
pub mod measures;
pub mod numeric;
pub mod oracle;
pub mod scenario;
pub mod verify;

pub use algebra::{Algebra, Gns, TensorPair};
pub use error::{Error, Result};
pub use groups::FiniteGroup;
pub use hopf::HopfData;
pub use numeric::{CMatrix, Tolerance, C64};
pub use verify::{AxiomCheck, VerificationReport};
