//! Pseudo-spectral incompressible Navier–Stokes on the periodic box
//! [0, 2π)³, with a regularity-diagnostics engine built around the
//! divergence of the velocity direction div(u/|u|).
//!
//! The crate has four layers:
//!
//! - field representations and spectral calculus ([`grid`], [`field`],
//!   [`spectral`]): transforms, derivatives, the 2/3 dealias rule and the
//!   Leray projection;
//! - a flow solver ([`solver`], [`initial`]): explicit RK4 time stepping of
//!   the projected momentum equation, pressure recovery, initial-condition
//!   library;
//! - diagnostics ([`diagnostics`], [`norms`], [`exponents`]): direction
//!   divergence and its incompressibility identity, mixed L^p_t(L^q_x)
//!   accumulators, the L³ differential-inequality tracker, the Serrin
//!   monitor, the pressure Calderón–Zygmund probe and exponent bookkeeping;
//! - functional-inequality verification ([`inequality`]): Sobolev,
//!   interpolation, Young and the combined lower-order absorption lemma over
//!   field ensembles.
//!
//! Experiment orchestration (JSON config, CSV/JSON emission, snapshots) lives
//! in [`config`], [`runner`] and [`snapshot`]; the `nsreg` binary is a thin
//! CLI over [`runner`]. Each major capability also has a runnable example
//! under `examples/`.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod exponents;
pub mod field;
pub mod grid;
pub mod inequality;
pub mod initial;
pub mod norms;
pub mod runner;
pub mod snapshot;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{ScalarField, VectorField};
pub use grid::Grid;
pub use spectral::SpectralField;
