//! Walk through one ship section.

use super::events::{check_flyby, check_launch, check_rendezvous, RendezvousAction};
use super::leg::{check_burn_arc, check_leg};
use super::mass::check_mass_budget;
use super::{ShipResiduals, ValidationConfig, Violation, ViolationKind};
use crate::catalog::constants::{MISSION_END, MISSION_START};
use crate::catalog::{body_state, AsteroidCatalog, Body, Epoch, Planet};
use crate::format::{Event, EventKind, ShipSection, StateRecord, SAME_EPOCH_DAYS};
use crate::propagation::ThrustProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum VisitAction {
    Deploy,
    Retrieve(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct VisitLog {
    pub asteroid: u32,
    pub ship_id: u32,
    pub epoch: Epoch,
    pub line: usize,
    pub action: VisitAction,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct UnloadLog {
    pub ship_id: u32,
    pub epoch: Epoch,
    pub asteroids: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ShipReport {
    pub violations: Vec<Violation>,
    pub visits: Vec<VisitLog>,
    pub unloads: Vec<UnloadLog>,
    pub residuals: ShipResiduals,
}

fn event_lines(event: &Event) -> Vec<(Epoch, usize)> {
    match event {
        Event::State(e) => vec![(e.pre.epoch, e.pre.line), (e.post.epoch, e.post.line)],
        Event::Burn(b) => b.lines.iter().map(|l| (l.epoch, l.line)).collect(),
    }
}

/// Mission window and time ordering, reported at most once per event each.
fn timing(ship_id: u32, ship: &ShipSection, out: &mut Vec<Violation>) {
    let mut previous: Option<Epoch> = None;
    for event in &ship.events {
        let lines = event_lines(event);
        if let Some(&(t, line)) = lines.iter().find(|(t, _)| !t.in_mission_window()) {
            let bound = if t < MISSION_START {
                MISSION_START
            } else {
                MISSION_END
            };
            out.push(
                Violation::new(
                    ViolationKind::Window,
                    t.mjd(),
                    bound.mjd(),
                    format!(
                        "epoch {} MJD outside the mission window {}..{} MJD",
                        t.mjd(),
                        MISSION_START.mjd(),
                        MISSION_END.mjd()
                    ),
                )
                .ship(ship_id)
                .at(t)
                .line(line),
            );
        }
        let mut reported = false;
        for (t, line) in lines {
            if let Some(p) = previous {
                if t.mjd() < p.mjd() - SAME_EPOCH_DAYS && !reported {
                    out.push(
                        Violation::structural(format!(
                            "epoch {} MJD is earlier than the preceding line ({} MJD)",
                            t.mjd(),
                            p.mjd()
                        ))
                        .ship(ship_id)
                        .at(t)
                        .line(line),
                    );
                    reported = true;
                }
            }
            previous = Some(t);
        }
    }
}

pub(crate) fn validate_ship(
    ship: &ShipSection,
    catalog: &AsteroidCatalog,
    config: &ValidationConfig,
) -> ShipReport {
    let id = ship.ship_id;
    let tol = &config.tolerances;
    let mut violations = Vec::new();
    let mut visits = Vec::new();
    let mut unloads = Vec::new();
    let mut residuals = ShipResiduals {
        ship_id: id,
        ..ShipResiduals::default()
    };
    timing(id, ship, &mut violations);

    let mut exit: Option<&StateRecord> = None;
    let mut arcs: Vec<ThrustProfile> = Vec::new();
    let mut arcs_ok = true;
    let mut aboard: Vec<(u32, f64)> = Vec::new();

    for event in &ship.events {
        let e = match event {
            Event::Burn(arc) => {
                let (v, profile) = check_burn_arc(id, arc);
                violations.extend(v);
                match profile {
                    Some(p) => arcs.push(p),
                    None => arcs_ok = false,
                }
                continue;
            }
            Event::State(e) => e,
        };

        let body = match e.kind {
            EventKind::Launch => Body::Planet(Planet::Earth),
            EventKind::Flyby(p) => Body::Planet(p),
            EventKind::Rendezvous(a) => Body::Asteroid(a),
        };
        match body_state(catalog, body, e.pre.epoch) {
            Err(err) => violations.push(
                Violation::structural(format!("no ephemeris for {body}: {err}"))
                    .ship(id)
                    .at(e.pre.epoch)
                    .line(e.pre.line),
            ),
            Ok(state) => match e.kind {
                EventKind::Launch => violations.extend(check_launch(id, e, &state, tol)),
                EventKind::Rendezvous(asteroid) => {
                    let (v, action) = check_rendezvous(id, e, &state, tol, &config.mass_model);
                    violations.extend(v);
                    let action = match action {
                        RendezvousAction::Deploy => Some(VisitAction::Deploy),
                        RendezvousAction::Retrieve { collected } => {
                            aboard.push((asteroid, collected));
                            Some(VisitAction::Retrieve(collected))
                        }
                        RendezvousAction::Invalid { .. } => None,
                    };
                    if let Some(action) = action {
                        visits.push(VisitLog {
                            asteroid,
                            ship_id: id,
                            epoch: e.pre.epoch,
                            line: e.pre.line,
                            action,
                        });
                    }
                }
                EventKind::Flyby(planet) => {
                    let carried: f64 = aboard.iter().map(|a| a.1).sum();
                    let (v, outcome) = check_flyby(id, e, planet, &state, tol, carried);
                    violations.extend(v);
                    if outcome.unloaded {
                        unloads.push(UnloadLog {
                            ship_id: id,
                            epoch: e.pre.epoch,
                            asteroids: aboard.drain(..).map(|a| a.0).collect(),
                        });
                    }
                }
            },
        }

        if let Some(from) = exit {
            if arcs_ok {
                let check = check_leg(id, from, &e.pre, &arcs, tol, &config.integrator);
                violations.extend(check.violations);
                if let Some(r) = check.residual {
                    residuals.legs += 1;
                    residuals.position = residuals.position.max(r.position);
                    residuals.velocity = residuals.velocity.max(r.velocity);
                    residuals.mass = residuals.mass.max(r.mass);
                }
            }
        }
        arcs.clear();
        arcs_ok = true;
        exit = Some(&e.post);
    }

    violations.extend(check_mass_budget(ship, &config.mass_model, tol));
    ShipReport {
        violations,
        visits,
        unloads,
        residuals,
    }
}
