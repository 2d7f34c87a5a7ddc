use std::f64::consts::TAU;

use thiserror::Error;

const NEWTON_MAX_ITER: usize = 50;
const RESIDUAL_TOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KeplerError {
    #[error("eccentricity {0} outside [0, 1)")]
    Eccentricity(f64),
    #[error("mean anomaly {0} is not finite")]
    MeanAnomaly(f64),
    #[error("Kepler iteration did not converge (M = {mean_anomaly}, e = {eccentricity}, residual {residual:e})")]
    NoConvergence {
        mean_anomaly: f64,
        eccentricity: f64,
        residual: f64,
    },
}

/// Solve `M = E - e sin E` for the eccentric anomaly `E ∈ [0, 2π)`.
///
/// `mean_anomaly` may be any finite angle; it is reduced modulo 2π first.
/// Newton iteration is seeded at `M + e sin M` and falls back to bisection
/// (the residual is monotone in `E`) when it fails to reach the tolerance.
pub fn solve_kepler(mean_anomaly: f64, eccentricity: f64) -> Result<f64, KeplerError> {
    if !(0.0..1.0).contains(&eccentricity) {
        return Err(KeplerError::Eccentricity(eccentricity));
    }
    if !mean_anomaly.is_finite() {
        return Err(KeplerError::MeanAnomaly(mean_anomaly));
    }
    let m = mean_anomaly.rem_euclid(TAU);
    let residual = |e_anom: f64| e_anom - eccentricity * e_anom.sin() - m;

    let mut e_anom = m + eccentricity * m.sin();
    for _ in 0..NEWTON_MAX_ITER {
        let f = residual(e_anom);
        if f.abs() < RESIDUAL_TOL {
            return Ok(wrap(e_anom));
        }
        e_anom -= f / (1.0 - eccentricity * e_anom.cos());
        if !e_anom.is_finite() {
            break;
        }
    }

    // f(0) = -m <= 0 and f(2π) = 2π - m > 0.
    let (mut lo, mut hi) = (0.0, TAU);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let f = residual(mid);
        if f.abs() < RESIDUAL_TOL || hi - lo < 4.0 * f64::EPSILON {
            break;
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = residual(mid);
    if r.abs() < 1e-12 {
        Ok(wrap(mid))
    } else {
        Err(KeplerError::NoConvergence {
            mean_anomaly,
            eccentricity,
            residual: r,
        })
    }
}

// The root lies in [0, 2π); a converged iterate can only leave that range
// by rounding.
fn wrap(e_anom: f64) -> f64 {
    if e_anom < 0.0 {
        0.0
    } else if e_anom >= TAU {
        TAU - TAU * f64::EPSILON
    } else {
        e_anom
    }
}
