use std::fmt::Write as _;

use thiserror::Error;

use super::{Event, EventKind, SolutionDocument, BURN_EVENT_ID};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    #[error("document has no ship sections")]
    Empty,
    #[error("ship section {index} has ID {found}, expected {expected}")]
    ShipOrder {
        index: usize,
        expected: u32,
        found: u32,
    },
    #[error("ship {0} does not start with exactly one launch")]
    Launch(u32),
    #[error("ship {ship}: burn arc {index} is malformed ({reason})")]
    BurnArc {
        ship: u32,
        index: usize,
        reason: &'static str,
    },
    #[error("ship {0}: non-finite value")]
    NonFinite(u32),
}

/// Scientific notation with 15 significant digits, widened to 16 or 17
/// only when needed to read back the identical `f64`.
pub fn format_real(x: f64) -> String {
    for precision in 14..16 {
        let s = format!("{x:.precision$e}");
        if s.parse::<f64>() == Ok(x) {
            return s;
        }
    }
    format!("{x:.16e}")
}

fn check(doc: &SolutionDocument) -> Result<(), SerializeError> {
    if doc.ships.is_empty() {
        return Err(SerializeError::Empty);
    }
    for (index, ship) in doc.ships.iter().enumerate() {
        let expected = index as u32 + 1;
        if ship.ship_id != expected {
            return Err(SerializeError::ShipOrder {
                index,
                expected,
                found: ship.ship_id,
            });
        }
        let launches = ship
            .state_events()
            .filter(|e| e.kind == EventKind::Launch)
            .count();
        let first_is_launch = matches!(
            ship.events.first(),
            Some(Event::State(e)) if e.kind == EventKind::Launch
        );
        if launches != 1 || !first_is_launch {
            return Err(SerializeError::Launch(ship.ship_id));
        }
        for (index, event) in ship.events.iter().enumerate() {
            match event {
                Event::Burn(arc) => {
                    let bad = |reason| SerializeError::BurnArc {
                        ship: ship.ship_id,
                        index,
                        reason,
                    };
                    let n = arc.lines.len();
                    if n < 4 {
                        return Err(bad("fewer than four lines"));
                    }
                    if !arc.lines[0].is_zero() || !arc.lines[n - 1].is_zero() {
                        return Err(bad("boundary lines must have zero thrust"));
                    }
                    if arc.lines[1].is_zero() || arc.lines[n - 2].is_zero() {
                        return Err(bad("first and last samples must be nonzero"));
                    }
                    if arc.lines[0].epoch != arc.lines[1].epoch
                        || arc.lines[n - 1].epoch != arc.lines[n - 2].epoch
                    {
                        return Err(bad("boundary epochs must repeat the sample epochs"));
                    }
                    let finite = arc.lines.iter().all(|l| {
                        l.epoch.mjd().is_finite() && l.thrust.iter().all(|c| c.is_finite())
                    });
                    if !finite {
                        return Err(SerializeError::NonFinite(ship.ship_id));
                    }
                }
                Event::State(e) => {
                    let finite = [e.pre, e.post].iter().all(|r| {
                        r.epoch.mjd().is_finite()
                            && r.mass.is_finite()
                            && r.position
                                .iter()
                                .chain(r.velocity.iter())
                                .all(|c| c.is_finite())
                    });
                    if !finite {
                        return Err(SerializeError::NonFinite(ship.ship_id));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Render a document in the canonical file layout: single spaces, reals
/// from [`format_real`], every line (including the last) ended by `\n`.
pub fn serialize_solution(doc: &SolutionDocument) -> Result<String, SerializeError> {
    check(doc)?;
    let lines: usize = doc.ships.iter().map(|s| s.line_count()).sum();
    let mut out = String::with_capacity(lines * 200);
    for ship in &doc.ships {
        let id = ship.ship_id;
        for event in &ship.events {
            match event {
                Event::State(e) => {
                    for r in [&e.pre, &e.post] {
                        let _ = write!(out, "{id} {}", e.kind.code());
                        let values = [r.epoch.mjd()]
                            .into_iter()
                            .chain(r.position.iter().copied())
                            .chain(r.velocity.iter().copied())
                            .chain([r.mass]);
                        for v in values {
                            out.push(' ');
                            out.push_str(&format_real(v));
                        }
                        out.push('\n');
                    }
                }
                Event::Burn(arc) => {
                    for l in &arc.lines {
                        let _ = write!(out, "{id} {BURN_EVENT_ID} {}", format_real(l.epoch.mjd()));
                        for &c in l.thrust.iter() {
                            out.push(' ');
                            out.push_str(&format_real(c));
                        }
                        out.push('\n');
                    }
                }
            }
        }
    }
    Ok(out)
}
