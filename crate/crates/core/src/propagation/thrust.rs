use thiserror::Error;

use super::dopri::{self, Failure, State, Tolerance, DIM};
use super::{IntegratorConfig, PropagationError, StateVector};
use crate::catalog::constants::{DAY_S, MU_SUN};
use crate::catalog::Epoch;
use crate::Vector3;

/// Epoch slack when matching a state to the start of a burn arc, days.
const EPOCH_SLACK: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("a thrust profile needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("thrust sample {index} is not later than the previous sample")]
    NotIncreasing { index: usize },
    #[error("thrust sample {index} is not finite")]
    NonFinite { index: usize },
}

/// Thrust vectors (N) sampled at strictly increasing epochs over one burn
/// arc, interpolated with piecewise cubic Lagrange polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct ThrustProfile {
    epochs: Vec<Epoch>,
    /// Days since the first sample.
    offsets: Vec<f64>,
    thrust: Vec<Vector3>,
}

impl ThrustProfile {
    pub fn new<I>(samples: I) -> Result<Self, ProfileError>
    where
        I: IntoIterator<Item = (Epoch, Vector3)>,
    {
        let (epochs, thrust): (Vec<Epoch>, Vec<Vector3>) = samples.into_iter().unzip();
        if epochs.len() < 2 {
            return Err(ProfileError::TooFewSamples(epochs.len()));
        }
        for (index, (t, u)) in epochs.iter().zip(&thrust).enumerate() {
            if !t.mjd().is_finite() || !u.iter().all(|c| c.is_finite()) {
                return Err(ProfileError::NonFinite { index });
            }
            if index > 0 && !(t.mjd() > epochs[index - 1].mjd()) {
                return Err(ProfileError::NotIncreasing { index });
            }
        }
        let t0 = epochs[0].mjd();
        let offsets = epochs.iter().map(|t| t.mjd() - t0).collect();
        Ok(ThrustProfile {
            epochs,
            offsets,
            thrust,
        })
    }

    pub fn start(&self) -> Epoch {
        self.epochs[0]
    }

    pub fn end(&self) -> Epoch {
        self.epochs[self.epochs.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.epochs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    pub fn samples(&self) -> impl Iterator<Item = (Epoch, Vector3)> + '_ {
        self.epochs.iter().copied().zip(self.thrust.iter().copied())
    }

    /// Index and magnitude of the strongest sample.
    pub fn max_magnitude(&self) -> (usize, f64) {
        self.thrust
            .iter()
            .map(|u| u.norm())
            .enumerate()
            .fold(
                (0, 0.0),
                |best, (i, m)| if m > best.1 { (i, m) } else { best },
            )
    }

    fn segment_of(&self, x: f64) -> usize {
        let last = self.offsets.len() - 2;
        self.offsets
            .partition_point(|&o| o <= x)
            .saturating_sub(1)
            .min(last)
    }

    /// Interpolant on segment `seg` at `x` days from the first sample.
    ///
    /// Uses the four nodes around the segment, shifted inward at the ends;
    /// short profiles fall back to the highest degree their nodes support.
    fn eval(&self, seg: usize, x: f64) -> Vector3 {
        let n = self.offsets.len();
        let width = n.min(4);
        let first = seg.saturating_sub(1).min(n - width);
        let nodes = first..first + width;
        let mut out = Vector3::zeros();
        for j in nodes.clone() {
            let mut w = 1.0;
            for m in nodes.clone() {
                if m != j {
                    w *= (x - self.offsets[m]) / (self.offsets[j] - self.offsets[m]);
                }
            }
            out += w * self.thrust[j];
        }
        out
    }
}

/// Interpolated thrust vector (N) at `t`, which must lie within the
/// profile's span.
pub fn interpolate_thrust(profile: &ThrustProfile, t: Epoch) -> Result<Vector3, PropagationError> {
    let x = t.mjd() - profile.start().mjd();
    let span = profile.offsets[profile.offsets.len() - 1];
    if !(x >= -EPOCH_SLACK && x <= span + EPOCH_SLACK) {
        return Err(PropagationError::OutsideProfile(t));
    }
    let x = x.clamp(0.0, span);
    Ok(profile.eval(profile.segment_of(x), x))
}

/// Result of integrating one burn arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurnOutcome {
    pub state: StateVector,
    /// Smallest heliocentric distance over the accepted steps, km.
    pub min_radius: f64,
}

/// Integrate a propelled arc from the profile's first sample to its last.
///
/// The state must be at the profile start. Integration steps never cross a
/// sample epoch, so the interpolant is smooth within every step.
pub fn propagate_burn(
    state: &StateVector,
    profile: &ThrustProfile,
    config: &IntegratorConfig,
) -> Result<BurnOutcome, PropagationError> {
    if (state.epoch.mjd() - profile.start().mjd()).abs() > EPOCH_SLACK {
        return Err(PropagationError::EpochMismatch {
            state: state.epoch,
            profile: profile.start(),
        });
    }
    let tol = Tolerance {
        abs: [
            config.abs_tol_pos,
            config.abs_tol_pos,
            config.abs_tol_pos,
            config.abs_tol_vel,
            config.abs_tol_vel,
            config.abs_tol_vel,
            config.abs_tol_mass,
        ],
        rel: config.rel_tol,
    };
    let ve = config.propulsion.exhaust_velocity();
    let start = profile.start();
    let mut y: State = [
        state.position.x,
        state.position.y,
        state.position.z,
        state.velocity.x,
        state.velocity.y,
        state.velocity.z,
        state.mass,
    ];
    let mut min_radius = state.position.norm();
    let mut h = config.max_step.min(600.0);

    for seg in 0..profile.len() - 1 {
        let t0 = profile.offsets[seg] * DAY_S;
        let t1 = profile.offsets[seg + 1] * DAY_S;
        let mut rhs = |t: f64, y: &State| -> Result<State, f64> {
            let m = y[6];
            if !(m > 0.0) {
                return Err(t);
            }
            let u = profile.eval(seg, t / DAY_S);
            let r = Vector3::new(y[0], y[1], y[2]);
            let r2 = r.norm_squared();
            let g = -MU_SUN / (r2 * r2.sqrt());
            // N / kg = m/s², scaled to km/s².
            let a = 1e-3 / m;
            Ok([
                y[3],
                y[4],
                y[5],
                g * y[0] + a * u.x,
                g * y[1] + a * u.y,
                g * y[2] + a * u.z,
                -u.norm() / ve,
            ])
        };
        let mut observe = |_t: f64, y: &State| {
            min_radius = min_radius.min((y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt());
        };
        y = dopri::integrate(
            &mut rhs,
            t0,
            y,
            t1,
            &mut h,
            config.max_step,
            config.min_step,
            &tol,
            &mut observe,
        )
        .map_err(|f| match f {
            Failure::Underflow(t) => PropagationError::StepUnderflow(start.add_seconds(t)),
            Failure::Rhs(t) => PropagationError::MassDepleted(start.add_seconds(t)),
        })?;
        if !(y[6] > 0.0) {
            return Err(PropagationError::MassDepleted(start.add_seconds(t1)));
        }
    }
    debug_assert_eq!(y.len(), DIM);
    Ok(BurnOutcome {
        state: StateVector {
            epoch: profile.end(),
            position: Vector3::new(y[0], y[1], y[2]),
            velocity: Vector3::new(y[3], y[4], y[5]),
            mass: y[6],
        },
        min_radius,
    })
}

/// State at the end of a burn arc; see [`propagate_burn`].
pub fn thrust_propagate(
    state: &StateVector,
    profile: &ThrustProfile,
    config: &IntegratorConfig,
) -> Result<StateVector, PropagationError> {
    propagate_burn(state, profile, config).map(|o| o.state)
}
