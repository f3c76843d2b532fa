//! Stationary, isentropic, spherically symmetric gas flows issued from a
//! point source.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! * [`thermo`]: thermodynamic states generated by a Massieu–Planck potential.
//! * [`gas`]: isentrope closed forms `T(v)`, `p(v)`, `f(v)` for ideal and
//!   reduced van der Waals gases.
//! * [`euler`]: the implicit inviscid solution, its branches, existence radius
//!   and far-field asymptotics.
//! * [`phase`]: gas / intermediate / liquid labels for van der Waals flows.
//! * [`viscous`]: the singularly perturbed viscous radial equation as a
//!   two-point boundary value problem.
//! * [`expansions`]: singular and regular series in the source intensity,
//!   with residual-order fitting.
//!
//! File formats and the command line live in the `srcflow` crate.

#![no_std]
// NaN inputs must fail the range checks, so they are written as negated comparisons
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod euler;
pub mod expansions;
pub mod gas;
pub mod math;
pub mod phase;
pub mod roots;
pub mod thermo;
pub mod viscous;

pub use error::{Error, Result};
pub use euler::{
    Branch, Calibration, DensityProfile, ExistenceRadius, FlowConfig, ProfileRecord,
};
pub use gas::{GasKind, Invertibility, IsentropeModel};
pub use phase::PhaseLabel;
pub use thermo::{MassieuPotential, StatePoint};
pub use viscous::{BvpSolution, StepSummary, ViscousConfig};
