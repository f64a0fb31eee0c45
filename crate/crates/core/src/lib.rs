//! Desirability-based reasoning on finite possibility spaces, in exact
//! rational arithmetic.
//!
//! The crate is `no_std` (it needs `alloc`). File formats and the command
//! line live in the `desir` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bernstein;
pub mod cone;
pub mod error;
pub mod exchangeable;
pub mod gamble;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod space;
pub mod symmetry;

pub use cone::{avoids_nonpositivity, Coherence, Decomposition, DesirCone, NonPositiveCombination, PrevisionValue};
pub use error::Error;
pub use gamble::Gamble;
pub use rational::Rational;
pub use space::{CountSpace, CountVector, Domain, Permutation, SequenceSpace};
