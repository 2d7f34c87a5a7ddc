use std::f64::consts::TAU;

use thiserror::Error;

use super::kepler::{solve_kepler, KeplerError};
use super::{Cartesian, Epoch};
use crate::Vector3;

/// Classical orbital elements at a reference epoch. Lengths in km, angles
/// in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalElements {
    pub semi_major_axis: f64,
    pub eccentricity: f64,
    pub inclination: f64,
    /// Longitude of the ascending node.
    pub lan: f64,
    /// Argument of perihelion.
    pub arg_peri: f64,
    pub mean_anomaly: f64,
    pub epoch: Epoch,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElementsError {
    #[error("semi-major axis must be positive, got {0} km")]
    SemiMajorAxis(f64),
    #[error("eccentricity must lie in [0, 1), got {0}")]
    Eccentricity(f64),
    #[error("state is not a bound elliptic orbit (specific energy {0} km²/s²)")]
    Unbound(f64),
    #[error("degenerate state: zero angular momentum")]
    Rectilinear,
}

impl OrbitalElements {
    pub fn validate(&self) -> Result<(), ElementsError> {
        if !(self.semi_major_axis > 0.0) {
            return Err(ElementsError::SemiMajorAxis(self.semi_major_axis));
        }
        if !(0.0..1.0).contains(&self.eccentricity) {
            return Err(ElementsError::Eccentricity(self.eccentricity));
        }
        Ok(())
    }

    /// Mean motion in rad/s.
    pub fn mean_motion(&self, mu: f64) -> f64 {
        (mu / self.semi_major_axis.powi(3)).sqrt()
    }

    /// Orbital period in seconds.
    pub fn period(&self, mu: f64) -> f64 {
        TAU / self.mean_motion(mu)
    }

    pub fn mean_anomaly_at(&self, mu: f64, t: Epoch) -> f64 {
        self.mean_anomaly + self.mean_motion(mu) * t.seconds_since(self.epoch)
    }

    /// Perihelion direction `P` and the in-plane normal `Q`.
    pub fn perifocal_basis(&self) -> (Vector3, Vector3) {
        let (so, co) = self.arg_peri.sin_cos();
        let (sn, cn) = self.lan.sin_cos();
        let (si, ci) = self.inclination.sin_cos();
        let p = Vector3::new(co * cn - so * sn * ci, co * sn + so * cn * ci, so * si);
        let q = Vector3::new(-so * cn - co * sn * ci, -so * sn + co * cn * ci, co * si);
        (p, q)
    }
}

/// Cartesian heliocentric state of a Keplerian orbit at epoch `t`.
pub fn elements_to_state(
    elements: &OrbitalElements,
    mu: f64,
    t: Epoch,
) -> Result<Cartesian, KeplerError> {
    let a = elements.semi_major_axis;
    let e = elements.eccentricity;
    let ecc_anom = solve_kepler(elements.mean_anomaly_at(mu, t), e)?;
    let half = 0.5 * ecc_anom;
    let true_anom = 2.0 * f64::atan2((1.0 + e).sqrt() * half.sin(), (1.0 - e).sqrt() * half.cos());
    let p = a * (1.0 - e * e);
    let radius = p / (1.0 + e * true_anom.cos());
    let (pv, qv) = elements.perifocal_basis();
    let (sf, cf) = true_anom.sin_cos();
    let position = radius * (pv * cf + qv * sf);
    let velocity = (mu / p).sqrt() * (-pv * sf + qv * (e + cf));
    Ok(Cartesian { position, velocity })
}

/// Inverse of [`elements_to_state`] for bound, non-rectilinear states.
///
/// Node and perihelion angles are ill-defined for equatorial or circular
/// orbits; the values returned there still reproduce the state.
pub fn state_to_elements(
    state: &Cartesian,
    mu: f64,
    epoch: Epoch,
) -> Result<OrbitalElements, ElementsError> {
    let r_vec = state.position;
    let v_vec = state.velocity;
    let r = r_vec.norm();
    let v2 = v_vec.norm_squared();
    let energy = 0.5 * v2 - mu / r;
    if energy >= 0.0 {
        return Err(ElementsError::Unbound(energy));
    }
    let h = r_vec.cross(&v_vec);
    let h_norm = h.norm();
    if h_norm == 0.0 {
        return Err(ElementsError::Rectilinear);
    }
    let a = -mu / (2.0 * energy);
    let e_vec = ((v2 - mu / r) * r_vec - r_vec.dot(&v_vec) * v_vec) / mu;
    let e = e_vec.norm();
    if e >= 1.0 {
        return Err(ElementsError::Eccentricity(e));
    }
    let w = h / h_norm;
    let inclination = f64::atan2((w.x * w.x + w.y * w.y).sqrt(), w.z);
    let node = Vector3::new(-h.y, h.x, 0.0);
    let node_norm = node.norm();
    let lan = if node_norm > 1e-12 * h_norm {
        f64::atan2(node.y, node.x).rem_euclid(TAU)
    } else {
        0.0
    };
    // In-plane reference axes: ascending node and its 90° successor.
    let n_hat = Vector3::new(lan.cos(), lan.sin(), 0.0);
    let m_hat = w.cross(&n_hat);
    let arg_lat = f64::atan2(r_vec.dot(&m_hat), r_vec.dot(&n_hat));
    let (arg_peri, true_anom) = if e > 1e-12 {
        let omega = f64::atan2(e_vec.dot(&m_hat), e_vec.dot(&n_hat));
        (omega.rem_euclid(TAU), (arg_lat - omega).rem_euclid(TAU))
    } else {
        (0.0, arg_lat.rem_euclid(TAU))
    };
    let half = 0.5 * true_anom;
    let ecc_anom = 2.0 * f64::atan2((1.0 - e).sqrt() * half.sin(), (1.0 + e).sqrt() * half.cos());
    let mean_anomaly = (ecc_anom - e * ecc_anom.sin()).rem_euclid(TAU);
    Ok(OrbitalElements {
        semi_major_axis: a,
        eccentricity: e,
        inclination,
        lan,
        arg_peri,
        mean_anomaly,
        epoch,
    })
}
