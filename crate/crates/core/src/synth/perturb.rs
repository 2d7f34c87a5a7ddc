//! Controlled damage to a valid solution.
//!
//! Each site is a line read by exactly one check, so a perturbation larger
//! than the tolerance produces exactly one violation of a known kind and one
//! smaller than the tolerance produces none.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::random_unit;
use crate::catalog::constants::MU_SUN;
use crate::catalog::elements_to_state;
use crate::format::{Event, EventKind, SolutionDocument, StateRecord};
use crate::verifier::ViolationKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbKind {
    /// km
    Position,
    /// km/s
    Velocity,
    /// kg
    Mass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbSite {
    /// First line of the launch: the ship at rest relative to Earth. No leg
    /// starts from it.
    LaunchReference,
    /// Second line of the ship's last event. No leg starts from it either.
    FinalExit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub ship_id: u32,
    pub site: PerturbSite,
    pub kind: PerturbKind,
    pub magnitude: f64,
}

/// The violation a perturbation beyond tolerance at this site triggers, or
/// None when the site would not give a single clean violation.
fn expected(event: EventKind, site: PerturbSite, kind: PerturbKind) -> Option<ViolationKind> {
    use PerturbKind::*;
    match (site, kind) {
        (_, Position) => Some(ViolationKind::RendezvousPos),
        (PerturbSite::LaunchReference, Velocity) => Some(ViolationKind::RendezvousVel),
        (PerturbSite::LaunchReference, Mass) => Some(ViolationKind::MassDiscontinuity),
        (PerturbSite::FinalExit, Velocity) => match event {
            EventKind::Launch => None,
            EventKind::Flyby(_) => Some(ViolationKind::GaMagnitude),
            EventKind::Rendezvous(_) => Some(ViolationKind::RendezvousVel),
        },
        (PerturbSite::FinalExit, Mass) => match event {
            EventKind::Launch => Some(ViolationKind::MassDiscontinuity),
            EventKind::Flyby(_) => Some(ViolationKind::MassDiscontinuity),
            EventKind::Rendezvous(_) => None,
        },
    }
}

/// Apply `p` to a copy of `doc`. Returns the copy and the violation kind
/// the site's check reports once the magnitude exceeds its tolerance, or
/// None if the ship is missing or the site has no single owning check.
pub fn perturb_solution(
    doc: &SolutionDocument,
    p: &Perturbation,
    seed: u64,
) -> Option<(SolutionDocument, ViolationKind)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = doc.clone();
    let ship = out.ships.iter_mut().find(|s| s.ship_id == p.ship_id)?;
    let event = match p.site {
        PerturbSite::LaunchReference => ship.events.iter_mut().find_map(|e| match e {
            Event::State(s) if s.kind == EventKind::Launch => Some(s),
            _ => None,
        })?,
        PerturbSite::FinalExit => ship.events.iter_mut().rev().find_map(|e| match e {
            Event::State(s) => Some(s),
            Event::Burn(_) => None,
        })?,
    };
    let event_kind = event.kind;
    let kind = expected(event_kind, p.site, p.kind)?;
    let record: &mut StateRecord = match p.site {
        PerturbSite::LaunchReference => &mut event.pre,
        PerturbSite::FinalExit => &mut event.post,
    };
    match p.kind {
        PerturbKind::Position => record.position += p.magnitude * random_unit(&mut rng),
        PerturbKind::Velocity => {
            let direction = match event_kind {
                // Along v-infinity, so only its magnitude changes.
                EventKind::Flyby(planet) if p.site == PerturbSite::FinalExit => {
                    let body =
                        elements_to_state(&planet.constants().elements, MU_SUN, record.epoch)
                            .ok()?;
                    (record.velocity - body.velocity).normalize()
                }
                _ => random_unit(&mut rng),
            };
            record.velocity += p.magnitude * direction;
        }
        PerturbKind::Mass => {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            record.mass += sign * p.magnitude;
        }
    }
    Some((out, kind))
}
