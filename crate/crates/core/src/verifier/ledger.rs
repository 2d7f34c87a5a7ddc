//! Cross-ship mining bookkeeping.

use std::collections::{BTreeMap, HashMap};

use super::ship::{ShipReport, VisitAction, VisitLog};
use super::{ValidationConfig, Violation, ViolationKind};
use crate::catalog::constants::YEAR_DAYS;
use crate::catalog::Epoch;
use crate::scoring::{AsteroidRecord, MiningLedger, Visit};

fn visit(v: &VisitLog) -> Visit {
    Visit {
        ship_id: v.ship_id,
        epoch: v.epoch,
    }
}

/// Resolve deploy/retrieve pairs across all ships and apply the
/// single-mining, minimum-stay and collected-mass rules.
pub(crate) fn merge(
    ships: &[ShipReport],
    ship_count: usize,
    config: &ValidationConfig,
) -> (MiningLedger, Vec<Violation>) {
    let mut by_asteroid: BTreeMap<u32, Vec<&VisitLog>> = BTreeMap::new();
    for v in ships.iter().flat_map(|s| &s.visits) {
        by_asteroid.entry(v.asteroid).or_default().push(v);
    }
    let unloaded: HashMap<(u32, u32), Epoch> = ships
        .iter()
        .flat_map(|s| &s.unloads)
        .flat_map(|u| u.asteroids.iter().map(move |&a| ((u.ship_id, a), u.epoch)))
        .collect();

    let mut violations = Vec::new();
    let mut asteroids = BTreeMap::new();
    for (id, mut visits) in by_asteroid {
        visits.sort_by(|a, b| {
            a.epoch
                .mjd()
                .total_cmp(&b.epoch.mjd())
                .then(a.ship_id.cmp(&b.ship_id))
                .then(a.line.cmp(&b.line))
        });
        let mut record = AsteroidRecord::new(id);
        for (k, v) in visits.iter().enumerate() {
            let problem = match (k, v.action) {
                (0, VisitAction::Deploy) => {
                    record.deploy = Some(visit(v));
                    None
                }
                (0, VisitAction::Retrieve(_)) => Some(format!(
                    "asteroid {id} visited for retrieval before any miner was released"
                )),
                (1, VisitAction::Retrieve(m)) => {
                    record.retrieve = Some(visit(v));
                    record.collected = m;
                    record.unloaded = unloaded.get(&(v.ship_id, id)).copied();
                    None
                }
                (1, VisitAction::Deploy) => {
                    Some(format!("a second miner released on asteroid {id}"))
                }
                _ => Some(format!("asteroid {id} rendezvoused more than twice")),
            };
            if let Some(message) = problem {
                violations.push(
                    Violation::structural(message)
                        .ship(v.ship_id)
                        .at(v.epoch)
                        .line(v.line),
                );
            }
        }
        if let (Some(d), Some(r)) = (record.deploy, record.retrieve) {
            let stay = (r.epoch.mjd() - d.epoch.mjd()) / YEAR_DAYS;
            let line = visits[1].line;
            match config.mining.cap(stay) {
                Err(_) => violations.push(
                    Violation::new(
                        ViolationKind::MiningDuration,
                        stay,
                        config.mining.min_stay,
                        format!(
                            "miner on asteroid {id} stayed {stay:.6} years, minimum {} year",
                            config.mining.min_stay
                        ),
                    )
                    .ship(r.ship_id)
                    .at(r.epoch)
                    .line(line),
                ),
                Ok(cap) if record.collected > cap + config.tolerances.mass => violations.push(
                    Violation::new(
                        ViolationKind::MiningCap,
                        record.collected,
                        cap,
                        format!(
                            "{:.6} kg collected from asteroid {id}, at most {cap:.6} kg after {stay:.6} years",
                            record.collected
                        ),
                    )
                    .ship(r.ship_id)
                    .at(r.epoch)
                    .line(line),
                ),
                Ok(_) => {}
            }
        }
        asteroids.insert(id, record);
    }
    (
        MiningLedger {
            ship_count,
            asteroids,
        },
        violations,
    )
}
