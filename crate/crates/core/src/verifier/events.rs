//! Boundary conditions of launches, rendezvous and flybys.

use super::{MassModel, ToleranceSet, Violation, ViolationKind, MAX_EARTH_VINF};
use crate::catalog::{Cartesian, Planet, PlanetConstants};
use crate::format::{StateEvent, StateRecord, SAME_EPOCH_DAYS};

fn tag(v: Violation, ship_id: u32, record: &StateRecord) -> Violation {
    v.ship(ship_id).at(record.epoch).line(record.line)
}

fn pair_epochs(ship_id: u32, event: &StateEvent, what: &str) -> Option<Violation> {
    let gap = (event.post.epoch.mjd() - event.pre.epoch.mjd()).abs();
    (gap > SAME_EPOCH_DAYS).then(|| {
        tag(
            Violation::structural(format!(
                "{what} lines have different epochs ({} and {})",
                event.pre.epoch, event.post.epoch
            )),
            ship_id,
            &event.post,
        )
    })
}

/// Worst position mismatch of the two lines against `body`.
fn position_check(
    ship_id: u32,
    event: &StateEvent,
    body: &Cartesian,
    tol: &ToleranceSet,
    what: &str,
) -> Option<Violation> {
    let (err, record) = [&event.pre, &event.post]
        .into_iter()
        .map(|r| ((r.position - body.position).norm(), r))
        .fold((f64::NEG_INFINITY, &event.pre), |a, b| {
            if b.0 > a.0 {
                b
            } else {
                a
            }
        });
    (err > tol.pos).then(|| {
        tag(
            Violation::new(
                ViolationKind::RendezvousPos,
                err,
                tol.pos,
                format!(
                    "{what} position differs by {err:.3} km (limit {} km)",
                    tol.pos
                ),
            ),
            ship_id,
            record,
        )
    })
}

fn velocity_check<'a>(
    ship_id: u32,
    records: impl IntoIterator<Item = &'a StateRecord>,
    body: &Cartesian,
    tol: &ToleranceSet,
    what: &str,
) -> Option<Violation> {
    let worst = records
        .into_iter()
        .map(|r| ((r.velocity - body.velocity).norm(), r))
        .fold(None::<(f64, &StateRecord)>, |a, b| match a {
            Some(a) if a.0 >= b.0 => Some(a),
            _ => Some(b),
        })?;
    (worst.0 > tol.vel).then(|| {
        tag(
            Violation::new(
                ViolationKind::RendezvousVel,
                worst.0,
                tol.vel,
                format!(
                    "{what} velocity differs by {:.6} km/s (limit {} km/s)",
                    worst.0, tol.vel
                ),
            ),
            ship_id,
            worst.1,
        )
    })
}

/// Launch from Earth: both lines at Earth's position, the first line moving
/// with Earth, the second within 6 km/s of it, mass unchanged.
pub fn check_launch(
    ship_id: u32,
    event: &StateEvent,
    earth: &Cartesian,
    tol: &ToleranceSet,
) -> Vec<Violation> {
    let mut out = Vec::new();
    out.extend(pair_epochs(ship_id, event, "launch"));
    out.extend(position_check(ship_id, event, earth, tol, "launch (Earth)"));
    out.extend(velocity_check(
        ship_id,
        [&event.pre],
        earth,
        tol,
        "launch reference (Earth)",
    ));
    let vinf = (event.post.velocity - earth.velocity).norm();
    if vinf > MAX_EARTH_VINF {
        out.push(tag(
            Violation::new(
                ViolationKind::LaunchVinf,
                vinf,
                MAX_EARTH_VINF,
                format!("launch v-infinity {vinf:.6} km/s exceeds {MAX_EARTH_VINF} km/s"),
            ),
            ship_id,
            &event.post,
        ));
    }
    let dm = event.post.mass - event.pre.mass;
    if dm.abs() > tol.mass {
        out.push(tag(
            Violation::new(
                ViolationKind::MassDiscontinuity,
                dm.abs(),
                tol.mass,
                format!("launch lines differ in mass by {dm:.6} kg"),
            ),
            ship_id,
            &event.post,
        ));
    }
    out
}

/// What a rendezvous mass step means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RendezvousAction {
    Deploy,
    Retrieve { collected: f64 },
    Invalid { step: f64 },
}

/// A drop of one miner mass deploys; a non-negative step retrieves.
pub fn classify_rendezvous(dm: f64, model: &MassModel, tol: &ToleranceSet) -> RendezvousAction {
    if (dm + model.miner_mass).abs() <= tol.mass {
        RendezvousAction::Deploy
    } else if dm >= -tol.mass {
        RendezvousAction::Retrieve {
            collected: dm.max(0.0),
        }
    } else {
        RendezvousAction::Invalid { step: dm }
    }
}

/// Rendezvous with an asteroid: position and velocity of both lines match
/// the asteroid, and the mass step is a deployment or a retrieval.
pub fn check_rendezvous(
    ship_id: u32,
    event: &StateEvent,
    asteroid: &Cartesian,
    tol: &ToleranceSet,
    model: &MassModel,
) -> (Vec<Violation>, RendezvousAction) {
    let mut out = Vec::new();
    out.extend(pair_epochs(ship_id, event, "rendezvous"));
    out.extend(position_check(ship_id, event, asteroid, tol, "rendezvous"));
    out.extend(velocity_check(
        ship_id,
        [&event.pre, &event.post],
        asteroid,
        tol,
        "rendezvous",
    ));
    let action = classify_rendezvous(event.post.mass - event.pre.mass, model, tol);
    if let RendezvousAction::Invalid { step } = action {
        out.push(tag(
            Violation::new(
                ViolationKind::MassDiscontinuity,
                step,
                -model.miner_mass,
                format!(
                    "rendezvous mass step {step:.6} kg is neither a miner release ({} kg) nor a retrieval (>= 0 kg)",
                    -model.miner_mass
                ),
            ),
            ship_id,
            &event.post,
        ));
    }
    (out, action)
}

/// Largest turn of the v-infinity vector a flyby of `planet` can give,
/// rad: `2·asin((μ/rp) / (v∞² + μ/rp))`.
pub fn max_turn_angle(planet: &PlanetConstants, vinf: f64) -> f64 {
    let k = planet.gravitational_parameter / planet.min_pericenter_radius;
    2.0 * (k / (vinf * vinf + k)).asin()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlybyOutcome {
    /// Incoming v-infinity magnitude, km/s.
    pub vinf: f64,
    /// Cargo was unloaded at Earth.
    pub unloaded: bool,
}

/// Instantaneous gravity assist: same position as the planet, v-infinity
/// magnitude preserved, turn angle within the pericenter limit. An Earth
/// flyby at no more than 6 km/s unloads everything carried.
pub fn check_flyby(
    ship_id: u32,
    event: &StateEvent,
    planet: Planet,
    planet_state: &Cartesian,
    tol: &ToleranceSet,
    carried: f64,
) -> (Vec<Violation>, FlybyOutcome) {
    let name = planet.name();
    let mut out = Vec::new();
    out.extend(pair_epochs(ship_id, event, "flyby"));
    out.extend(position_check(
        ship_id,
        event,
        planet_state,
        tol,
        &format!("{name} flyby"),
    ));

    let vin = event.pre.velocity - planet_state.velocity;
    let vout = event.post.velocity - planet_state.velocity;
    let (a, b) = (vin.norm(), vout.norm());
    if (a - b).abs() > tol.vel {
        out.push(tag(
            Violation::new(
                ViolationKind::GaMagnitude,
                (a - b).abs(),
                tol.vel,
                format!("{name} flyby changes v-infinity from {a:.6} to {b:.6} km/s"),
            ),
            ship_id,
            &event.post,
        ));
    }
    let theta = f64::atan2(vin.cross(&vout).norm(), vin.dot(&vout));
    let limit = max_turn_angle(planet.constants(), a) + f64::atan2(tol.vel, a);
    if theta > limit {
        out.push(tag(
            Violation::new(
                ViolationKind::GaDeflection,
                theta,
                limit,
                format!(
                    "{name} flyby turns v-infinity by {:.4} deg, limit {:.4} deg",
                    theta.to_degrees(),
                    limit.to_degrees()
                ),
            ),
            ship_id,
            &event.post,
        ));
    }

    let dm = event.post.mass - event.pre.mass;
    let unloading = planet == Planet::Earth && a <= MAX_EARTH_VINF && carried > 0.0;
    let expected = if unloading { -carried } else { 0.0 };
    if (dm - expected).abs() > tol.mass {
        let what = if unloading {
            format!("must unload the {carried:.6} kg carried")
        } else {
            "must keep the mass unchanged".to_string()
        };
        out.push(tag(
            Violation::new(
                ViolationKind::MassDiscontinuity,
                dm,
                expected,
                format!("{name} flyby mass step {dm:.6} kg; the flyby {what}"),
            ),
            ship_id,
            &event.post,
        ));
    }
    (
        out,
        FlybyOutcome {
            vinf: a,
            unloaded: unloading,
        },
    )
}
