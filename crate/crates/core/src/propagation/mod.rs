//! Mining Ship state propagation.
//!
//! Coast arcs are advanced analytically with Lagrange f and g functions;
//! burn arcs are integrated with an adaptive Dormand–Prince 5(4) scheme
//! whose thrust input is the cubic Lagrange interpolant of the daily
//! thrust samples.

mod coast;
mod dopri;
mod leg;
mod thrust;

use thiserror::Error;

use crate::catalog::constants::G0;
use crate::catalog::{Cartesian, Epoch, KeplerError};
use crate::Vector3;

pub use coast::{coast_min_radius, coast_propagate};
pub use leg::{fly_leg, LegOutcome};
pub use thrust::{
    interpolate_thrust, propagate_burn, thrust_propagate, BurnOutcome, ProfileError, ThrustProfile,
};

/// Heliocentric ship state: km, km/s, kg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub epoch: Epoch,
    pub position: Vector3,
    pub velocity: Vector3,
    pub mass: f64,
}

impl StateVector {
    pub fn new(epoch: Epoch, position: Vector3, velocity: Vector3, mass: f64) -> Self {
        StateVector {
            epoch,
            position,
            velocity,
            mass,
        }
    }

    pub fn from_cartesian(epoch: Epoch, c: Cartesian, mass: f64) -> Self {
        StateVector::new(epoch, c.position, c.velocity, mass)
    }

    pub fn cartesian(&self) -> Cartesian {
        Cartesian {
            position: self.position,
            velocity: self.velocity,
        }
    }
}

/// Electric propulsion parameters of every Mining Ship.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropulsionConstants {
    /// Specific impulse, s.
    pub isp: f64,
    /// Maximum thrust magnitude, N.
    pub t_max: f64,
    /// m/s²
    pub g0: f64,
}

impl PropulsionConstants {
    pub const GTOC12: PropulsionConstants = PropulsionConstants {
        isp: 4000.0,
        t_max: 0.6,
        g0: G0,
    };

    /// Exhaust velocity `Isp·g0` in m/s; mass flow is `|T| / ve` kg/s.
    pub fn exhaust_velocity(&self) -> f64 {
        self.isp * self.g0
    }
}

impl Default for PropulsionConstants {
    fn default() -> Self {
        Self::GTOC12
    }
}

/// Step-size control for burn arcs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    /// km
    pub abs_tol_pos: f64,
    /// km/s
    pub abs_tol_vel: f64,
    /// kg
    pub abs_tol_mass: f64,
    /// Upper bound on a single step, s. Near 1 AU this, not the error
    /// estimate, is what limits the step size.
    pub max_step: f64,
    /// Steps shorter than this abort the integration, s.
    pub min_step: f64,
    pub propulsion: PropulsionConstants,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol_pos: 1e-6,
            abs_tol_vel: 1e-9,
            abs_tol_mass: 1e-9,
            max_step: 43200.0,
            min_step: 1e-6,
            propulsion: PropulsionConstants::GTOC12,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagationError {
    #[error("coast arc is not bound (specific energy {energy} km²/s² at {epoch})")]
    Unbound { epoch: Epoch, energy: f64 },
    #[error("negative propagation interval ({0} s)")]
    NegativeInterval(f64),
    #[error("ship mass reached zero at {0}")]
    MassDepleted(Epoch),
    #[error("integrator step size underflow at {0}")]
    StepUnderflow(Epoch),
    #[error("state epoch {state} does not match burn arc start {profile}")]
    EpochMismatch { state: Epoch, profile: Epoch },
    #[error("epoch {0} outside the thrust profile span")]
    OutsideProfile(Epoch),
    #[error("burn arcs overlap or fall outside the leg ({0})")]
    ArcOrder(Epoch),
    #[error(transparent)]
    Kepler(#[from] KeplerError),
}
