//! Dynamics of the beta transformation at desk scale.
//!
//! The crate covers the beta shift and its relatives end to end: the base
//! maps and their symbolic dynamics, invariant measures computed three
//! independent ways, the transfer operator in the Hessenberg wavelet basis
//! and its spectrum, periodic-orbit polynomial combinatorics, epsilon-widened
//! map families with islands of stability, Bergman polynomial machinery, and
//! bit-level carry models of multiplication.

pub mod bergman;
pub mod carrymul;
pub mod error;
pub mod fixed;
pub mod hessenberg;
pub mod islands;
pub mod linalg;
pub mod maps;
pub mod measures;
pub mod rng;
pub mod stepfn;
pub mod orbits;
pub mod symbolic;

pub use error::{Error, Result};
pub use maps::{Beta, MapKind, MidpointRule, Trajectory, UnitPoint};
pub use stepfn::StepFn;
pub use symbolic::BitSeq;
