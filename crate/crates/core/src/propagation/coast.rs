use std::f64::consts::TAU;

use super::{PropagationError, StateVector};
use crate::catalog::constants::MU_SUN;

/// Two-body orbit quantities shared by the coast routines.
struct Conic {
    r0: f64,
    a: f64,
    /// mean motion, rad/s
    n: f64,
    /// e·cos E0 and e·sin E0
    ec: f64,
    es: f64,
}

impl Conic {
    fn of(state: &StateVector) -> Result<Conic, PropagationError> {
        let r0 = state.position.norm();
        let energy = 0.5 * state.velocity.norm_squared() - MU_SUN / r0;
        if !(energy < 0.0) {
            return Err(PropagationError::Unbound {
                epoch: state.epoch,
                energy,
            });
        }
        let a = -MU_SUN / (2.0 * energy);
        let n = (MU_SUN / (a * a * a)).sqrt();
        let sigma = state.position.dot(&state.velocity) / MU_SUN.sqrt();
        Ok(Conic {
            r0,
            a,
            n,
            ec: 1.0 - r0 / a,
            es: sigma / a.sqrt(),
        })
    }

    fn eccentricity(&self) -> f64 {
        self.ec.hypot(self.es)
    }
}

/// Solve the Kepler equation in eccentric-anomaly-difference form,
/// `x - ec·sin x + es·(1 - cos x) = dm`.
fn solve_delta_e(c: &Conic, dm: f64) -> f64 {
    let f = |x: f64| x - c.ec * x.sin() + c.es * (1.0 - x.cos()) - dm;
    // |f(x) - (x - dm)| <= 2e < 2, so the root is bracketed.
    let (mut lo, mut hi) = (dm - 2.0, dm + 2.0);
    let mut x = dm;
    for _ in 0..60 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx < 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let dfx = 1.0 - c.ec * x.cos() + c.es * x.sin();
        let mut next = x - fx / dfx;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * (1.0 + x.abs()) {
            return next;
        }
        x = next;
    }
    x
}

/// Advance an unpropelled ship by `dt` seconds along its two-body orbit.
///
/// Uses Lagrange f and g functions, so circular and equatorial orbits need
/// no special handling. Mass is carried unchanged. Fails on parabolic or
/// hyperbolic states.
pub fn coast_propagate(state: &StateVector, dt: f64) -> Result<StateVector, PropagationError> {
    if dt < 0.0 || dt.is_nan() {
        return Err(PropagationError::NegativeInterval(dt));
    }
    let conic = Conic::of(state)?;
    if dt == 0.0 {
        return Ok(*state);
    }
    let period = TAU / conic.n;
    let reduced = dt - (dt / period).floor() * period;
    let x = solve_delta_e(&conic, conic.n * reduced);
    let (sx, cx) = x.sin_cos();
    let a = conic.a;
    let r0 = conic.r0;
    let r = a + (r0 - a) * cx + conic.es * a * sx;
    let f = 1.0 - a / r0 * (1.0 - cx);
    let g = reduced - (x - sx) / conic.n;
    let fdot = -(MU_SUN * a).sqrt() * sx / (r * r0);
    let gdot = 1.0 - a / r * (1.0 - cx);
    Ok(StateVector {
        epoch: state.epoch.add_seconds(dt),
        position: f * state.position + g * state.velocity,
        velocity: fdot * state.position + gdot * state.velocity,
        mass: state.mass,
    })
}

/// Smallest heliocentric distance reached while coasting for `dt` seconds.
///
/// Exact: the radius is monotone between apsides, so the minimum is either
/// an endpoint or the perihelion radius when a perihelion passage falls
/// inside the interval.
pub fn coast_min_radius(state: &StateVector, dt: f64) -> Result<f64, PropagationError> {
    let conic = Conic::of(state)?;
    let end = coast_propagate(state, dt)?;
    let endpoints = conic.r0.min(end.position.norm());
    let e = conic.eccentricity();
    if e < 1e-12 {
        return Ok(endpoints);
    }
    let e0 = f64::atan2(conic.es, conic.ec);
    let m0 = (e0 - e * e0.sin()).rem_euclid(TAU);
    let to_perihelion = if m0 == 0.0 { 0.0 } else { (TAU - m0) / conic.n };
    if dt >= to_perihelion {
        Ok(endpoints.min(conic.a * (1.0 - e)))
    } else {
        Ok(endpoints)
    }
}
