//! The competition solution file: one line per record, two integers
//! (ship ID, event ID) followed by real numbers, space separated.
//!
//! State events (launch, flyby, rendezvous) occupy two consecutive lines
//! holding the state immediately before and after the event. Burn arcs are
//! runs of event `-1` lines carrying daily thrust samples, opened and closed
//! by zero-thrust lines that repeat the first and last sample epochs.

mod lint;
mod parse;
mod write;

use crate::catalog::{Epoch, Planet};
use crate::propagation::{ProfileError, StateVector, ThrustProfile};
use crate::Vector3;

pub use lint::{lint_solution, LintKind, LintWarning};
pub(crate) use parse::SAME_EPOCH_DAYS;
pub use parse::{parse_solution, parse_solution_bytes, Diagnostic, DiagnosticKind, ParseError};
pub use write::{format_real, serialize_solution, SerializeError};

pub const BURN_EVENT_ID: i32 = -1;

/// What a pair of state lines records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Launch,
    Flyby(Planet),
    Rendezvous(u32),
}

impl EventKind {
    pub fn from_code(code: i32) -> Option<EventKind> {
        match code {
            0 => Some(EventKind::Launch),
            -2 => Some(EventKind::Flyby(Planet::Venus)),
            -3 => Some(EventKind::Flyby(Planet::Earth)),
            -4 => Some(EventKind::Flyby(Planet::Mars)),
            1..=60_000 => Some(EventKind::Rendezvous(code as u32)),
            _ => None,
        }
    }

    pub fn code(self) -> i32 {
        match self {
            EventKind::Launch => 0,
            EventKind::Flyby(Planet::Venus) => -2,
            EventKind::Flyby(Planet::Earth) => -3,
            EventKind::Flyby(Planet::Mars) => -4,
            EventKind::Rendezvous(id) => id as i32,
        }
    }
}

/// One state line. `line` is the 1-based source line, or 0 for records
/// that were built in memory; it is metadata and ignored by `==`.
#[derive(Debug, Clone, Copy)]
pub struct StateRecord {
    pub epoch: Epoch,
    pub position: Vector3,
    pub velocity: Vector3,
    pub mass: f64,
    pub line: usize,
}

impl PartialEq for StateRecord {
    fn eq(&self, other: &Self) -> bool {
        self.epoch == other.epoch
            && self.position == other.position
            && self.velocity == other.velocity
            && self.mass == other.mass
    }
}

impl StateRecord {
    pub fn new(epoch: Epoch, position: Vector3, velocity: Vector3, mass: f64) -> Self {
        StateRecord {
            epoch,
            position,
            velocity,
            mass,
            line: 0,
        }
    }

    pub fn from_state(s: &StateVector) -> Self {
        StateRecord::new(s.epoch, s.position, s.velocity, s.mass)
    }

    pub fn state(&self) -> StateVector {
        StateVector::new(self.epoch, self.position, self.velocity, self.mass)
    }
}

/// One burn line. `line` as for [`StateRecord`].
#[derive(Debug, Clone, Copy)]
pub struct ThrustRecord {
    pub epoch: Epoch,
    /// N
    pub thrust: Vector3,
    pub line: usize,
}

impl PartialEq for ThrustRecord {
    fn eq(&self, other: &Self) -> bool {
        self.epoch == other.epoch && self.thrust == other.thrust
    }
}

impl ThrustRecord {
    pub fn new(epoch: Epoch, thrust: Vector3) -> Self {
        ThrustRecord {
            epoch,
            thrust,
            line: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.thrust.iter().all(|&c| c == 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateEvent {
    pub kind: EventKind,
    pub pre: StateRecord,
    pub post: StateRecord,
}

/// All lines of one burn arc, boundary zero-thrust lines included.
#[derive(Debug, Clone, PartialEq)]
pub struct BurnArc {
    pub lines: Vec<ThrustRecord>,
}

impl BurnArc {
    /// Builds an arc from its thrust samples, adding the zero-thrust
    /// boundary lines.
    pub fn from_samples(samples: &[(Epoch, Vector3)]) -> BurnArc {
        let mut lines = Vec::with_capacity(samples.len() + 2);
        if let (Some(first), Some(last)) = (samples.first(), samples.last()) {
            lines.push(ThrustRecord::new(first.0, Vector3::zeros()));
            lines.extend(samples.iter().map(|&(t, u)| ThrustRecord::new(t, u)));
            lines.push(ThrustRecord::new(last.0, Vector3::zeros()));
        }
        BurnArc { lines }
    }

    /// The thrust samples between the boundary lines.
    pub fn interior(&self) -> &[ThrustRecord] {
        if self.lines.len() < 2 {
            return &[];
        }
        &self.lines[1..self.lines.len() - 1]
    }

    pub fn start(&self) -> Epoch {
        self.lines[0].epoch
    }

    pub fn end(&self) -> Epoch {
        self.lines[self.lines.len() - 1].epoch
    }

    pub fn profile(&self) -> Result<ThrustProfile, ProfileError> {
        ThrustProfile::new(self.interior().iter().map(|r| (r.epoch, r.thrust)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    State(StateEvent),
    Burn(BurnArc),
}

impl Event {
    pub fn as_state(&self) -> Option<&StateEvent> {
        match self {
            Event::State(e) => Some(e),
            Event::Burn(_) => None,
        }
    }

    /// First source line of the event.
    pub fn line(&self) -> usize {
        match self {
            Event::State(e) => e.pre.line,
            Event::Burn(b) => b.lines.first().map_or(0, |l| l.line),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShipSection {
    pub ship_id: u32,
    pub events: Vec<Event>,
}

impl ShipSection {
    pub fn state_events(&self) -> impl Iterator<Item = &StateEvent> + '_ {
        self.events.iter().filter_map(Event::as_state)
    }

    pub fn line_count(&self) -> usize {
        self.events
            .iter()
            .map(|e| match e {
                Event::State(_) => 2,
                Event::Burn(b) => b.lines.len(),
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolutionDocument {
    pub ships: Vec<ShipSection>,
}

impl SolutionDocument {
    pub fn ship_count(&self) -> usize {
        self.ships.len()
    }

    pub fn ship(&self, ship_id: u32) -> Option<&ShipSection> {
        self.ships.iter().find(|s| s.ship_id == ship_id)
    }
}
