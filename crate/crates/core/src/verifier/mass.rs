use super::events::{classify_rendezvous, RendezvousAction};
use super::{MassModel, ToleranceSet, Violation, ViolationKind};
use crate::catalog::Planet;
use crate::format::{EventKind, ShipSection};

/// Audit one ship's mass: initial mass cap, miner count, propellant left
/// after dry mass and miners, and the running floor of dry mass plus cargo.
///
/// Cargo is inferred from the file alone: retrieval steps add to it and a
/// mass drop at an Earth flyby removes it.
pub fn check_mass_budget(
    section: &ShipSection,
    model: &MassModel,
    tol: &ToleranceSet,
) -> Vec<Violation> {
    let ship = section.ship_id;
    let mut out = Vec::new();
    let Some(launch) = section.state_events().find(|e| e.kind == EventKind::Launch) else {
        return out;
    };
    let m0 = launch.post.mass;
    if m0 > model.max_initial_mass + tol.mass {
        out.push(
            Violation::new(
                ViolationKind::InitialMass,
                m0,
                model.max_initial_mass,
                format!(
                    "initial mass {m0:.3} kg exceeds {} kg",
                    model.max_initial_mass
                ),
            )
            .ship(ship)
            .at(launch.post.epoch)
            .line(launch.post.line),
        );
    }

    let mut deploys = 0u32;
    let mut carried = 0.0f64;
    let mut worst: Option<(f64, f64, &crate::format::StateRecord)> = None;
    for event in section.state_events() {
        let dm = event.post.mass - event.pre.mass;
        match event.kind {
            EventKind::Rendezvous(_) => match classify_rendezvous(dm, model, tol) {
                RendezvousAction::Deploy => deploys += 1,
                RendezvousAction::Retrieve { collected } => carried += collected,
                RendezvousAction::Invalid { .. } => {}
            },
            EventKind::Flyby(Planet::Earth) if dm < -tol.mass => {
                carried = (carried + dm).max(0.0);
            }
            _ => {}
        }
        // The entry line is checked against the cargo held before the event.
        let floor_pre = model.dry_mass
            + if let EventKind::Flyby(_) = event.kind {
                carried - dm.min(0.0)
            } else {
                carried - dm.max(0.0)
            }
            .max(0.0);
        let floor_post = model.dry_mass + carried;
        for (record, floor) in [(&event.pre, floor_pre), (&event.post, floor_post)] {
            let deficit = floor - record.mass;
            if deficit > tol.mass && worst.is_none_or(|w| deficit > w.1 - w.0) {
                worst = Some((record.mass, floor, record));
            }
        }
    }
    if let Some((mass, floor, record)) = worst {
        out.push(
            Violation::new(
                ViolationKind::DryMassFloor,
                mass,
                floor,
                format!("mass {mass:.3} kg is below dry mass plus cargo ({floor:.3} kg)"),
            )
            .ship(ship)
            .at(record.epoch)
            .line(record.line),
        );
    }

    if deploys > model.max_miners {
        out.push(
            Violation::new(
                ViolationKind::MinerCount,
                f64::from(deploys),
                f64::from(model.max_miners),
                format!(
                    "{deploys} miners released, at most {} carried",
                    model.max_miners
                ),
            )
            .ship(ship),
        );
    }
    let propellant = m0 - model.dry_mass - f64::from(deploys) * model.miner_mass;
    if propellant < -tol.mass {
        out.push(
            Violation::new(
                ViolationKind::InitialMass,
                m0,
                model.dry_mass + f64::from(deploys) * model.miner_mass,
                format!("initial mass {m0:.3} kg cannot hold the dry mass and {deploys} miners"),
            )
            .ship(ship)
            .at(launch.post.epoch)
            .line(launch.post.line),
        );
    }
    out
}
