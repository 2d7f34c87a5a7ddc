//! Validation and scoring engine for GTOC 12 "Sustainable Asteroid Mining"
//! solution files.
//!
//! The crate is organised bottom-up:
//!
//! * [`catalog`] holds the physical constants, planet table, asteroid
//!   catalog loader and Keplerian ephemerides.
//! * [`propagation`] advances Mining Ship states along coast arcs
//!   (analytic two-body) and burn arcs (adaptive Dormand–Prince).
//! * [`format`] parses, serializes and lints the competition solution file.
//! * [`verifier`] checks every event and leg of a parsed solution and
//!   builds the mining ledger.
//! * [`scoring`] turns a ledger into the merit function.
//! * [`synth`] generates valid-by-construction solutions and controlled
//!   perturbations of them, used as test oracles.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod format;
pub mod propagation;
pub mod scoring;
pub mod synth;
pub mod verifier;

/// Cartesian 3-vector used for positions (km), velocities (km/s) and
/// thrust (N).
pub type Vector3 = nalgebra::Vector3<f64>;

pub use catalog::{
    body_state, elements_to_state, load_asteroid_catalog, solve_kepler, AsteroidCatalog, Body,
    Cartesian, Epoch, OrbitalElements, Planet, PlanetConstants,
};
pub use format::{lint_solution, parse_solution, serialize_solution, SolutionDocument};
pub use propagation::{
    coast_propagate, interpolate_thrust, thrust_propagate, IntegratorConfig, StateVector,
    ThrustProfile,
};
pub use scoring::{score, BonusMode, BonusModel, FleetRule, MiningLedger, ScoreBreakdown};
pub use verifier::{
    validate_bytes, validate_solution, validate_text, ToleranceSet, ValidationConfig,
    ValidationReport, Violation, ViolationKind,
};
