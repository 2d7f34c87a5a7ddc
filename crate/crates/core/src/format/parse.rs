use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{
    BurnArc, Event, EventKind, ShipSection, SolutionDocument, StateEvent, StateRecord,
    ThrustRecord, BURN_EVENT_ID,
};
use crate::catalog::Epoch;
use crate::Vector3;

/// Two epochs closer than this (days) are treated as the same instant when
/// grouping burn-arc boundary lines.
pub(crate) const SAME_EPOCH_DAYS: f64 = 1e-8;

const STATE_FIELDS: usize = 10;
const BURN_FIELDS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    NoShipSections,
    TrailingBlankLine,
    BlankLine,
    InvalidEncoding,
    FieldCount,
    InvalidInteger,
    InvalidReal,
    EventIdOutOfRange,
    ShipOrder,
    MissingLaunch,
    UnpairedEvent,
    BurnArc,
}

/// A parser complaint tied to a 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.diagnostics.as_slice() {
            [] => write!(f, "invalid solution file"),
            [only] => write!(f, "{only}"),
            [first, rest @ ..] => write!(f, "{first} (and {} more)", rest.len()),
        }
    }
}

fn diag(line: usize, kind: DiagnosticKind, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        line,
        kind,
        message: message.into(),
    }
}

struct RawLine {
    line: usize,
    ship: u32,
    event: i32,
    values: Vec<f64>,
}

fn tokenize(line: usize, text: &str) -> Result<RawLine, Diagnostic> {
    let tokens: Vec<&str> = text.split_ascii_whitespace().collect();
    let ship = tokens[0].parse::<u32>().map_err(|_| {
        diag(
            line,
            DiagnosticKind::InvalidInteger,
            format!("ship ID {:?} is not a positive integer", tokens[0]),
        )
    })?;
    if ship == 0 {
        return Err(diag(line, DiagnosticKind::ShipOrder, "ship IDs start at 1"));
    }
    let Some(event_token) = tokens.get(1) else {
        return Err(diag(line, DiagnosticKind::FieldCount, "missing event ID"));
    };
    let event = event_token.parse::<i64>().map_err(|_| {
        diag(
            line,
            DiagnosticKind::InvalidInteger,
            format!("event ID {event_token:?} is not an integer"),
        )
    })?;
    if !(-4..=60_000).contains(&event) {
        return Err(diag(
            line,
            DiagnosticKind::EventIdOutOfRange,
            format!("event ID {event} outside -4..=60000"),
        ));
    }
    let event = event as i32;
    let expected = if event == BURN_EVENT_ID {
        BURN_FIELDS
    } else {
        STATE_FIELDS
    };
    if tokens.len() != expected {
        return Err(diag(
            line,
            DiagnosticKind::FieldCount,
            format!(
                "event {event} needs {expected} fields, found {}",
                tokens.len()
            ),
        ));
    }
    let mut values = Vec::with_capacity(expected - 2);
    for token in &tokens[2..] {
        match token.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ => {
                return Err(diag(
                    line,
                    DiagnosticKind::InvalidReal,
                    format!("{token:?} is not a finite real number"),
                ))
            }
        }
    }
    Ok(RawLine {
        line,
        ship,
        event,
        values,
    })
}

fn state_record(raw: &RawLine) -> StateRecord {
    let v = &raw.values;
    StateRecord {
        epoch: Epoch::from_mjd(v[0]),
        position: Vector3::new(v[1], v[2], v[3]),
        velocity: Vector3::new(v[4], v[5], v[6]),
        mass: v[7],
        line: raw.line,
    }
}

fn thrust_record(raw: &RawLine) -> ThrustRecord {
    let v = &raw.values;
    ThrustRecord {
        epoch: Epoch::from_mjd(v[0]),
        thrust: Vector3::new(v[1], v[2], v[3]),
        line: raw.line,
    }
}

fn same_epoch(a: &ThrustRecord, b: &ThrustRecord) -> bool {
    (a.epoch.mjd() - b.epoch.mjd()).abs() <= SAME_EPOCH_DAYS
}

/// Reads one burn arc starting at `lines[0]`; returns the arc and the
/// number of lines consumed.
fn burn_arc(lines: &[RawLine]) -> Result<(BurnArc, usize), Diagnostic> {
    let run = lines
        .iter()
        .take_while(|r| r.event == BURN_EVENT_ID)
        .count();
    let records: Vec<ThrustRecord> = lines[..run].iter().map(thrust_record).collect();
    let first = &records[0];
    if !first.is_zero() {
        return Err(diag(
            first.line,
            DiagnosticKind::BurnArc,
            "burn arc must open with a zero-thrust line",
        ));
    }
    let Some(second) = records.get(1) else {
        return Err(diag(
            first.line,
            DiagnosticKind::BurnArc,
            "burn arc has no thrust samples",
        ));
    };
    if second.is_zero() || !same_epoch(first, second) {
        return Err(diag(
            second.line,
            DiagnosticKind::BurnArc,
            "second line of a burn arc must repeat the opening epoch with nonzero thrust",
        ));
    }
    for k in 2..records.len() {
        if records[k].is_zero() && same_epoch(&records[k], &records[k - 1]) {
            if k < 3 {
                return Err(diag(
                    records[k].line,
                    DiagnosticKind::BurnArc,
                    "burn arc needs at least two thrust samples",
                ));
            }
            return Ok((
                BurnArc {
                    lines: records[..=k].to_vec(),
                },
                k + 1,
            ));
        }
    }
    Err(diag(
        first.line,
        DiagnosticKind::BurnArc,
        format!(
            "burn arc starting at line {} is not closed by a zero-thrust line repeating the last epoch",
            first.line
        ),
    ))
}

fn section(ship: u32, lines: &[RawLine], diagnostics: &mut Vec<Diagnostic>) -> ShipSection {
    let mut events = Vec::new();
    if lines[0].event != 0 {
        diagnostics.push(diag(
            lines[0].line,
            DiagnosticKind::MissingLaunch,
            format!("section of ship {ship} must start with a launch (event 0)"),
        ));
    }
    let mut i = 0;
    while i < lines.len() {
        let raw = &lines[i];
        if raw.event == BURN_EVENT_ID {
            match burn_arc(&lines[i..]) {
                Ok((arc, used)) => {
                    events.push(Event::Burn(arc));
                    i += used;
                }
                Err(d) => {
                    diagnostics.push(d);
                    i += lines[i..]
                        .iter()
                        .take_while(|r| r.event == BURN_EVENT_ID)
                        .count();
                }
            }
            continue;
        }
        let kind = EventKind::from_code(raw.event).expect("event range checked by tokenizer");
        if kind == EventKind::Launch && i > 0 {
            diagnostics.push(diag(
                raw.line,
                DiagnosticKind::MissingLaunch,
                format!("ship {ship} launches a second time"),
            ));
        }
        match lines.get(i + 1) {
            Some(next) if next.event == raw.event => {
                events.push(Event::State(StateEvent {
                    kind,
                    pre: state_record(raw),
                    post: state_record(next),
                }));
                i += 2;
            }
            _ => {
                diagnostics.push(diag(
                    raw.line,
                    DiagnosticKind::UnpairedEvent,
                    format!(
                        "event {} needs two consecutive lines (before and after)",
                        raw.event
                    ),
                ));
                i += 1;
            }
        }
    }
    ShipSection {
        ship_id: ship,
        events,
    }
}

/// Parse a solution file.
///
/// Accepts `\n` or `\r\n` line endings, with or without a final line
/// break. A blank line anywhere, including after the final line break, is
/// rejected. All diagnostics found are reported together.
pub fn parse_solution(text: &str) -> Result<SolutionDocument, ParseError> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    if text.ends_with('\n') {
        lines.pop();
    }
    let lines: Vec<&str> = lines
        .into_iter()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    let Some(last_data) = lines.iter().rposition(|l| !l.trim().is_empty()) else {
        return Err(ParseError {
            diagnostics: vec![diag(1, DiagnosticKind::NoShipSections, "no ship sections")],
        });
    };

    let mut diagnostics = Vec::new();
    let mut raws = Vec::with_capacity(last_data + 1);
    for (idx, text) in lines[..=last_data].iter().enumerate() {
        let line = idx + 1;
        if text.trim().is_empty() {
            diagnostics.push(diag(line, DiagnosticKind::BlankLine, "blank line"));
            continue;
        }
        match tokenize(line, text) {
            Ok(raw) => raws.push(raw),
            Err(d) => diagnostics.push(d),
        }
    }
    if last_data + 1 < lines.len() {
        diagnostics.push(diag(
            last_data + 2,
            DiagnosticKind::TrailingBlankLine,
            "trailing newline: blank line after the last record",
        ));
    }
    if !diagnostics.is_empty() {
        return Err(ParseError { diagnostics });
    }

    let mut ships = Vec::new();
    let mut start = 0;
    let mut expected = 1u32;
    while start < raws.len() {
        let ship = raws[start].ship;
        let len = raws[start..].iter().take_while(|r| r.ship == ship).count();
        if ship != expected {
            diagnostics.push(diag(
                raws[start].line,
                DiagnosticKind::ShipOrder,
                format!("expected ship ID {expected}, found {ship}"),
            ));
        }
        ships.push(section(ship, &raws[start..start + len], &mut diagnostics));
        expected = ship.saturating_add(1);
        start += len;
    }
    if diagnostics.is_empty() {
        Ok(SolutionDocument { ships })
    } else {
        Err(ParseError { diagnostics })
    }
}

/// As [`parse_solution`], for raw bytes that may not be valid UTF-8.
pub fn parse_solution_bytes(bytes: &[u8]) -> Result<SolutionDocument, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_solution(text),
        Err(e) => {
            let line = 1 + bytes[..e.valid_up_to()]
                .iter()
                .filter(|&&b| b == b'\n')
                .count();
            Err(ParseError {
                diagnostics: vec![diag(
                    line,
                    DiagnosticKind::InvalidEncoding,
                    "file is not ASCII/UTF-8 text",
                )],
            })
        }
    }
}
