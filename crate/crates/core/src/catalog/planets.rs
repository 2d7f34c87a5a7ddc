use super::constants::DEG;
use super::{Epoch, OrbitalElements};

/// The three planets available for gravity assists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Planet {
    Venus,
    Earth,
    Mars,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanetConstants {
    /// km³/s²
    pub gravitational_parameter: f64,
    /// km
    pub min_pericenter_radius: f64,
    pub elements: OrbitalElements,
}

const T0: Epoch = Epoch::from_mjd(64328.0);

static VENUS: PlanetConstants = PlanetConstants {
    gravitational_parameter: 3.24858592000e5,
    min_pericenter_radius: 6351.0,
    elements: OrbitalElements {
        semi_major_axis: 1.08208010521e8,
        eccentricity: 6.72988099539e-3,
        inclination: 3.39439096544 * DEG,
        lan: 7.65796397775e1 * DEG,
        arg_peri: 5.51107191497e1 * DEG,
        mean_anomaly: 1.11218416921e1 * DEG,
        epoch: T0,
    },
};

static EARTH: PlanetConstants = PlanetConstants {
    gravitational_parameter: 3.98600435436e5,
    min_pericenter_radius: 6678.0,
    elements: OrbitalElements {
        semi_major_axis: 1.49579151285e8,
        eccentricity: 1.65519129162e-2,
        inclination: 4.64389155500e-3 * DEG,
        lan: 1.98956406477e2 * DEG,
        arg_peri: 2.62960364700e2 * DEG,
        mean_anomaly: 3.58039899470e2 * DEG,
        epoch: T0,
    },
};

static MARS: PlanetConstants = PlanetConstants {
    gravitational_parameter: 4.28283752140e4,
    min_pericenter_radius: 3689.0,
    elements: OrbitalElements {
        semi_major_axis: 2.27951663551e8,
        eccentricity: 9.33662184095e-2,
        inclination: 1.84693231241 * DEG,
        lan: 4.94553142513e1 * DEG,
        arg_peri: 2.86731029267e2 * DEG,
        mean_anomaly: 2.38232037154e2 * DEG,
        epoch: T0,
    },
};

impl Planet {
    pub const ALL: [Planet; 3] = [Planet::Venus, Planet::Earth, Planet::Mars];

    pub fn constants(self) -> &'static PlanetConstants {
        match self {
            Planet::Venus => &VENUS,
            Planet::Earth => &EARTH,
            Planet::Mars => &MARS,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Planet::Venus => "Venus",
            Planet::Earth => "Earth",
            Planet::Mars => "Mars",
        }
    }

    /// Case-insensitive lookup by name.
    pub fn from_name(name: &str) -> Option<Planet> {
        Planet::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(name))
    }
}
