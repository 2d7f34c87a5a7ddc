//! Burn-arc structure and leg propagation checks.

use serde::Serialize;

use super::{ToleranceSet, Violation, ViolationKind, MAX_THRUST_SAMPLE};
use crate::catalog::constants::{AU_KM, MIN_SUN_DISTANCE_AU};
use crate::format::{BurnArc, StateRecord};
use crate::propagation::{fly_leg, IntegratorConfig, ThrustProfile};

/// Slack on the one-day sample spacing, days.
const SPACING_SLACK: f64 = 1e-6;

/// Check the layout and thrust limit of one burn arc and build its
/// profile. The profile is `None` when the samples cannot be interpolated.
pub fn check_burn_arc(ship_id: u32, arc: &BurnArc) -> (Vec<Violation>, Option<ThrustProfile>) {
    let mut out = Vec::new();
    let interior = arc.interior();
    let n = interior.len();
    for k in 1..n {
        let step = interior[k].epoch.mjd() - interior[k - 1].epoch.mjd();
        let last = k == n - 1;
        let ok = if last {
            step > 0.0 && step <= 1.0 + SPACING_SLACK
        } else {
            (step - 1.0).abs() <= SPACING_SLACK
        };
        if !ok {
            let rule = if last {
                "the final increment must be positive and at most one day"
            } else {
                "samples must be one day apart"
            };
            out.push(
                Violation::structural(format!("burn sample spacing {step:.9} days; {rule}"))
                    .ship(ship_id)
                    .at(interior[k].epoch)
                    .line(interior[k].line),
            );
        }
    }
    if let Some(worst) = interior
        .iter()
        .max_by(|a, b| a.thrust.norm().total_cmp(&b.thrust.norm()))
    {
        let magnitude = worst.thrust.norm();
        if magnitude > MAX_THRUST_SAMPLE {
            out.push(
                Violation::new(
                    ViolationKind::ThrustMagnitude,
                    magnitude,
                    0.6,
                    format!("thrust sample of {magnitude:.9} N exceeds 0.6 N"),
                )
                .ship(ship_id)
                .at(worst.epoch)
                .line(worst.line),
            );
        }
    }
    match arc.profile() {
        Ok(p) => (out, Some(p)),
        Err(e) => {
            out.push(
                Violation::structural(format!("burn arc cannot be interpolated: {e}"))
                    .ship(ship_id)
                    .at(arc.start())
                    .line(arc.lines[0].line),
            );
            (out, None)
        }
    }
}

/// Mismatch between a propagated leg and the next event's entry line.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LegResidual {
    /// km
    pub position: f64,
    /// km/s
    pub velocity: f64,
    /// kg
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegCheck {
    pub violations: Vec<Violation>,
    /// None when the leg could not be propagated.
    pub residual: Option<LegResidual>,
}

/// Propagate from one event's exit line to the next event's entry line and
/// compare. At most one residual violation is reported per leg, naming the
/// component furthest outside its tolerance.
pub fn check_leg(
    ship_id: u32,
    from: &StateRecord,
    to: &StateRecord,
    arcs: &[ThrustProfile],
    tol: &ToleranceSet,
    config: &IntegratorConfig,
) -> LegCheck {
    let mut violations = Vec::new();
    let outcome = match fly_leg(&from.state(), arcs, to.epoch, config) {
        Ok(o) => o,
        Err(e) => {
            violations.push(
                Violation::new(
                    ViolationKind::PropagationFailure,
                    0.0,
                    0.0,
                    format!("leg from line {} cannot be propagated: {e}", from.line),
                )
                .ship(ship_id)
                .at(to.epoch)
                .line(to.line),
            );
            return LegCheck {
                violations,
                residual: None,
            };
        }
    };
    let residual = LegResidual {
        position: (outcome.state.position - to.position).norm(),
        velocity: (outcome.state.velocity - to.velocity).norm(),
        mass: (outcome.state.mass - to.mass).abs(),
    };
    let ratios = [
        (
            residual.position / tol.pos,
            residual.position,
            tol.pos,
            "km",
        ),
        (
            residual.velocity / tol.vel,
            residual.velocity,
            tol.vel,
            "km/s",
        ),
        (residual.mass / tol.mass, residual.mass, tol.mass, "kg"),
    ];
    let worst = ratios
        .iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("three components");
    if worst.0 > 1.0 {
        violations.push(
            Violation::new(
                ViolationKind::PropagationResidual,
                worst.1,
                worst.2,
                format!(
                    "propagated state misses line {} by {:.3} km, {:.6} km/s, {:.6} kg (worst: {:.6} {} against {} {})",
                    to.line,
                    residual.position,
                    residual.velocity,
                    residual.mass,
                    worst.1,
                    worst.3,
                    worst.2,
                    worst.3
                ),
            )
            .ship(ship_id)
            .at(to.epoch)
            .line(to.line),
        );
    }
    let floor = MIN_SUN_DISTANCE_AU * AU_KM;
    if outcome.min_radius < floor {
        violations.push(
            Violation::new(
                ViolationKind::SolarDistance,
                outcome.min_radius / AU_KM,
                MIN_SUN_DISTANCE_AU,
                format!(
                    "leg passes {:.4} AU from the Sun (minimum {MIN_SUN_DISTANCE_AU} AU)",
                    outcome.min_radius / AU_KM
                ),
            )
            .ship(ship_id)
            .at(to.epoch)
            .line(to.line),
        );
    }
    LegCheck {
        violations,
        residual: Some(residual),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::constants::{DAY_S, MU_SUN};
    use crate::catalog::{elements_to_state, Epoch, OrbitalElements};
    use crate::propagation::{coast_propagate, StateVector};
    use crate::Vector3;

    fn exit_state() -> StateVector {
        let r = 1.2 * AU_KM;
        let v = (MU_SUN / r).sqrt();
        StateVector::new(
            Epoch::from_mjd(65000.0),
            Vector3::new(0.0, r, 0.0),
            Vector3::new(-v, 0.0, 0.1),
            1500.0,
        )
    }

    fn kinds(v: &[Violation]) -> Vec<ViolationKind> {
        v.iter().map(|v| v.kind).collect()
    }

    #[test]
    fn consistent_coast_leg() {
        let s = exit_state();
        let end = coast_propagate(&s, 300.0 * DAY_S).unwrap();
        let check = check_leg(
            1,
            &StateRecord::from_state(&s),
            &StateRecord::from_state(&end),
            &[],
            &ToleranceSet::default(),
            &IntegratorConfig::default(),
        );
        assert!(check.violations.is_empty());
        assert!(check.residual.unwrap().position < 1e-6);
    }

    #[test]
    fn displaced_entry_line() {
        let s = exit_state();
        let mut end = coast_propagate(&s, 300.0 * DAY_S).unwrap();
        end.position += Vector3::new(1200.0, 0.0, 0.0);
        let check = check_leg(
            1,
            &StateRecord::from_state(&s),
            &StateRecord::from_state(&end),
            &[],
            &ToleranceSet::default(),
            &IntegratorConfig::default(),
        );
        assert_eq!(
            kinds(&check.violations),
            vec![ViolationKind::PropagationResidual]
        );
        assert!((check.violations[0].measured - 1200.0).abs() < 1e-3);
        assert_eq!(check.violations[0].limit, 1000.0);
    }

    #[test]
    fn sun_grazing_leg() {
        let el = OrbitalElements {
            semi_major_axis: AU_KM,
            eccentricity: 0.75,
            inclination: 0.0,
            lan: 0.0,
            arg_peri: 0.0,
            mean_anomaly: 3.0,
            epoch: Epoch::from_mjd(65000.0),
        };
        let c = elements_to_state(&el, MU_SUN, el.epoch).unwrap();
        let s = StateVector::from_cartesian(el.epoch, c, 1000.0);
        let end = coast_propagate(&s, 300.0 * DAY_S).unwrap();
        let check = check_leg(
            1,
            &StateRecord::from_state(&s),
            &StateRecord::from_state(&end),
            &[],
            &ToleranceSet::default(),
            &IntegratorConfig::default(),
        );
        assert_eq!(kinds(&check.violations), vec![ViolationKind::SolarDistance]);
        assert!((check.violations[0].measured - 0.25).abs() < 1e-9);
    }

    #[test]
    fn burn_arc_layout() {
        let t = |d: f64| Epoch::from_mjd(65000.0 + d);
        let u = Vector3::new(0.3, 0.0, 0.0);
        let good = BurnArc::from_samples(&[(t(0.0), u), (t(1.0), u), (t(2.0), u), (t(2.4), u)]);
        let (v, p) = check_burn_arc(1, &good);
        assert!(v.is_empty());
        assert_eq!(p.unwrap().len(), 4);

        let gap = BurnArc::from_samples(&[(t(0.0), u), (t(1.5), u), (t(2.0), u)]);
        assert_eq!(
            kinds(&check_burn_arc(1, &gap).0),
            vec![ViolationKind::Structural]
        );

        let strong = BurnArc::from_samples(&[(t(0.0), u), (t(1.0), Vector3::new(0.0, 0.61, 0.0))]);
        assert_eq!(
            kinds(&check_burn_arc(1, &strong).0),
            vec![ViolationKind::ThrustMagnitude]
        );
    }
}
