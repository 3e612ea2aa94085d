//! Radial Lorentz-Dirac worldlines for an electron entering a cutoff,
//! radially outward field.
//!
//! The crate integrates the scalar form of the Lorentz-Dirac equation in
//! 1+1 dimensions (normalized units: charge -1, mass 2/3, c = 1), detects
//! the turning point and exit from the field, and checks the simulated
//! worldlines against analytic lower bounds on the deceleration.
//!
//! ```no_run
//! use radial_ld::{integrate, EventKind, FieldModel, SimConfig};
//!
//! let field = FieldModel::cutoff_coulomb(1.0, 10.0)?;
//! let wl = integrate(&SimConfig::new(field, 0.05)?)?;
//! let turn = wl.event(EventKind::Turn).unwrap();
//! println!("turned at x = {}", turn.state.x);
//! # Ok::<(), radial_ld::Error>(())
//! ```

// `!(x > 0.0)` is how NaN gets rejected alongside non-positive input.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
mod error;
pub mod field;
pub mod format;
pub mod integrator;
pub mod kinematics;
pub mod sweep;
pub mod verify;

pub use bounds::{BoundKind, BoundQuery, BoundReport};
pub use error::{Error, Result};
pub use field::{FieldKind, FieldModel, Normalization, Profile, ScalarField};
pub use integrator::{
    derivative, integrate, integrate_in, volterra_accel, volterra_profile, Event, EventKind,
    Outcome, SimConfig, SimState, Worldline,
};
