//! Exact arithmetic for the quaternionic lattices Γ_{p,l} acting on a
//! product of a (p+1)-regular and an (l+1)-regular tree.
//!
//! Elements are integer quaternions up to nonzero scalars; every operation
//! is exact and deterministic.

pub mod abelian;
pub mod complex;
pub mod error;
pub mod lattice;
pub mod numtheory;
pub mod quat;
pub mod verify;

pub use error::{Error, MembershipFailure, Result};
pub use lattice::{
    Family, Generator, GroupElement, Lattice, LatticeParams, Order, Presentation, Square, Word,
};
pub use numtheory::{LegendreValue, NormEquationSolution, PadicCD};
pub use quat::{Direction, Quat, RationalMatrix3};
