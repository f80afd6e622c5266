//! Nonconservative electric-dipole forces between two atoms, one of them
//! initially excited.
//!
//! The crate is layered bottom-up: [`algebra`] and [`constants`] feed the
//! free-space Green functions in [`green`], the atom pair in [`model`] and the
//! integrator in [`quadrature`]. [`force`] evaluates the forces at several
//! levels of approximation and [`kinematics`] integrates them in time.

pub mod algebra;
pub mod constants;
pub mod error;
pub mod force;
pub mod green;
pub mod kinematics;
pub mod model;
pub mod quadrature;

pub use algebra::{CVector3, ComplexTensor3, RealTensor3, Vector3};
pub use constants::Constants;
pub use error::{Error, Result};
pub use force::{AppendixReading, AtomId, ForceSample, ForceTerm, FormulaTier, TermLabel};
pub use kinematics::{DisplacementConvention, DisplacementCurve};
pub use model::{hydrogen_preset, Atom, TwoAtomSystem};
pub use quadrature::{QuadratureOptions, QuadratureResult};
