//! Finite-difference integration of the gauged time-dependent Ginzburg-Landau
//! equations on a two-dimensional superconductor embedded in an insulating
//! blanket.
//!
//! The crate is `no_std` (with `alloc`). Fields live on a staggered grid:
//! the order parameter on vertices, the vector potential on edge midpoints,
//! and the induced magnetic field at cell centres. Gauge covariance is kept
//! exact at the discrete level through link variables.
//!
//! Four time integrators are provided, from fully explicit forward Euler to
//! a fully implicit scheme that combines an approximately factored
//! (alternating-direction) solve for the order parameter with a closed-form
//! logistic map for the cubic nonlinearity.

#![no_std]

#[cfg(feature = "std")]
extern crate std;

extern crate alloc;

pub mod error;
pub mod geometry;
pub mod grid;
pub mod integrators;
pub mod operators;
pub mod state;
pub mod tridiagonal;
pub mod vortex;

pub use error::{Error, Result};
pub use geometry::DomainGeometry;
pub use grid::GridArray;
pub use integrators::{semigroup_map, Stepper, StepperKind};
pub use num_complex::Complex64;
pub use state::{AppliedField, FieldState, GaugeFunction, PhysicsParams};
pub use vortex::VortexConfiguration;
