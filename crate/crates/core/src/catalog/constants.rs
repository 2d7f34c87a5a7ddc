//! Fixed problem constants.

use super::Epoch;

/// Gravitational parameter of the Sun, km³/s².
pub const MU_SUN: f64 = 1.32712440018e11;
/// Standard gravity, m/s².
pub const G0: f64 = 9.80665;
/// Astronomical unit, km.
pub const AU_KM: f64 = 1.49597870691e8;
/// Seconds per day.
pub const DAY_S: f64 = 86400.0;
/// Days per year.
pub const YEAR_DAYS: f64 = 365.25;

pub const MISSION_START: Epoch = Epoch::from_mjd(64328.0);
pub const MISSION_END: Epoch = Epoch::from_mjd(69807.0);

/// Minimum allowed heliocentric distance, AU.
pub const MIN_SUN_DISTANCE_AU: f64 = 0.3;

/// Largest asteroid ID in the candidate list.
pub const MAX_ASTEROID_ID: u32 = 60_000;

pub const DEG: f64 = std::f64::consts::PI / 180.0;
