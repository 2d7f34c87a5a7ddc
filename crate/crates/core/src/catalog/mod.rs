//! Physical constants, planet table, asteroid catalog and two-body
//! ephemerides.
//!
//! Internal units are km, km/s, kg and radians; epochs are Modified Julian
//! Dates (TT) and integration time is in seconds. The asteroid file supplies
//! AU and degrees, which are converted once at load.

mod asteroids;
pub mod constants;
mod elements;
mod kepler;
mod planets;

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

use crate::Vector3;

pub use asteroids::{load_asteroid_catalog, write_asteroid_catalog, AsteroidCatalog, CatalogError};
pub use elements::{elements_to_state, state_to_elements, ElementsError, OrbitalElements};
pub use kepler::{solve_kepler, KeplerError};
pub use planets::{Planet, PlanetConstants};

/// A Modified Julian Date in days (TT).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Epoch(f64);

impl Epoch {
    pub const fn from_mjd(mjd: f64) -> Self {
        Epoch(mjd)
    }

    pub const fn mjd(self) -> f64 {
        self.0
    }

    /// Seconds elapsed from `earlier` to `self`.
    pub fn seconds_since(self, earlier: Epoch) -> f64 {
        (self.0 - earlier.0) * constants::DAY_S
    }

    pub fn add_seconds(self, seconds: f64) -> Epoch {
        Epoch(self.0 + seconds / constants::DAY_S)
    }

    pub fn add_days(self, days: f64) -> Epoch {
        Epoch(self.0 + days)
    }

    pub fn in_mission_window(self) -> bool {
        self >= constants::MISSION_START && self <= constants::MISSION_END
    }
}

impl fmt::Display for Epoch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} MJD", self.0)
    }
}

/// Heliocentric position and velocity of a body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cartesian {
    pub position: Vector3,
    pub velocity: Vector3,
}

/// Anything with an ephemeris: one of the three GA planets or a catalog
/// asteroid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Body {
    Planet(Planet),
    Asteroid(u32),
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Body::Planet(p) => write!(f, "{}", p.name()),
            Body::Asteroid(id) => write!(f, "asteroid {id}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EphemerisError {
    #[error("unknown asteroid ID {0}")]
    UnknownAsteroid(u32),
    #[error(transparent)]
    Kepler(#[from] KeplerError),
}

/// Heliocentric state of `body` at epoch `t`.
pub fn body_state(
    catalog: &AsteroidCatalog,
    body: Body,
    t: Epoch,
) -> Result<Cartesian, EphemerisError> {
    let elements = match body {
        Body::Planet(p) => &p.constants().elements,
        Body::Asteroid(id) => catalog.get(id).ok_or(EphemerisError::UnknownAsteroid(id))?,
    };
    Ok(elements_to_state(elements, constants::MU_SUN, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epoch_arithmetic() {
        let t = Epoch::from_mjd(64328.0);
        assert_eq!(t.add_days(1.0).seconds_since(t), 86400.0);
        assert_eq!(t.add_seconds(43200.0).mjd(), 64328.5);
        assert!(t.in_mission_window());
        assert!(!Epoch::from_mjd(64000.0).in_mission_window());
        assert!(Epoch::from_mjd(69807.0).in_mission_window());
    }

    #[test]
    fn unknown_asteroid_is_an_error() {
        let catalog = AsteroidCatalog::default();
        let err = body_state(&catalog, Body::Asteroid(60001), Epoch::from_mjd(64328.0));
        assert_eq!(err, Err(EphemerisError::UnknownAsteroid(60001)));
    }
}
