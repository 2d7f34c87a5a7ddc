//! Constraint checking for parsed solutions.
//!
//! Each ship is walked independently (in parallel): every event is compared
//! with the ephemeris of its body, every leg between events is propagated
//! and compared with the next event's entry line, and the ship's mass budget
//! is audited. A merge phase then assembles the mining ledger across ships,
//! applies the one-miner-per-asteroid and stay-time rules, scores the
//! ledger and checks the fleet-size rule.

mod events;
mod ledger;
mod leg;
mod mass;
mod ship;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{AsteroidCatalog, Epoch};
use crate::format::{parse_solution_bytes, ParseError, SolutionDocument};
use crate::propagation::IntegratorConfig;
use crate::scoring::{score_with, BonusModel, FleetRule, MiningLedger, MiningRule, ScoreBreakdown};

pub use events::{
    check_flyby, check_launch, check_rendezvous, classify_rendezvous, max_turn_angle, FlybyOutcome,
    RendezvousAction,
};
pub use leg::{check_burn_arc, check_leg, LegCheck, LegResidual};
pub use mass::check_mass_budget;

/// Allowed mismatch between propagated/ephemeris values and file values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceSet {
    /// km
    pub pos: f64,
    /// km/s
    pub vel: f64,
    /// kg
    pub mass: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        ToleranceSet {
            pos: 1000.0,
            vel: 0.001,
            mass: 0.001,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassModel {
    /// kg
    pub dry_mass: f64,
    /// kg
    pub miner_mass: f64,
    pub max_miners: u32,
    /// kg
    pub max_initial_mass: f64,
}

impl Default for MassModel {
    fn default() -> Self {
        MassModel {
            dry_mass: 500.0,
            miner_mass: 40.0,
            max_miners: 20,
            max_initial_mass: 3000.0,
        }
    }
}

/// Hyperbolic excess speed limit at launch and at unloading flybys, km/s.
pub const MAX_EARTH_VINF: f64 = 6.0;

/// Largest thrust sample magnitude accepted, N (0.6 N plus rounding slack).
pub const MAX_THRUST_SAMPLE: f64 = 0.6 + 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationConfig {
    pub tolerances: ToleranceSet,
    pub mass_model: MassModel,
    pub integrator: IntegratorConfig,
    pub bonus: BonusModel,
    pub fleet: FleetRule,
    pub mining: MiningRule,
    /// Validate ships on the rayon pool. Results are identical either way.
    pub parallel: bool,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            tolerances: ToleranceSet::default(),
            mass_model: MassModel::default(),
            integrator: IntegratorConfig::default(),
            bonus: BonusModel::default(),
            fleet: FleetRule::default(),
            mining: MiningRule::default(),
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Window,
    LaunchVinf,
    RendezvousPos,
    RendezvousVel,
    MassDiscontinuity,
    PropagationResidual,
    PropagationFailure,
    ThrustMagnitude,
    GaMagnitude,
    GaDeflection,
    SolarDistance,
    MiningDuration,
    MiningCap,
    MinerCount,
    InitialMass,
    DryMassFloor,
    FleetSize,
    Structural,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::Window => "window",
            ViolationKind::LaunchVinf => "launch_vinf",
            ViolationKind::RendezvousPos => "rendezvous_pos",
            ViolationKind::RendezvousVel => "rendezvous_vel",
            ViolationKind::MassDiscontinuity => "mass_discontinuity",
            ViolationKind::PropagationResidual => "propagation_residual",
            ViolationKind::PropagationFailure => "propagation_failure",
            ViolationKind::ThrustMagnitude => "thrust_magnitude",
            ViolationKind::GaMagnitude => "ga_magnitude",
            ViolationKind::GaDeflection => "ga_deflection",
            ViolationKind::SolarDistance => "solar_distance",
            ViolationKind::MiningDuration => "mining_duration",
            ViolationKind::MiningCap => "mining_cap",
            ViolationKind::MinerCount => "miner_count",
            ViolationKind::InitialMass => "initial_mass",
            ViolationKind::DryMassFloor => "dry_mass_floor",
            ViolationKind::FleetSize => "fleet_size",
            ViolationKind::Structural => "structural",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One broken rule. `measured` and `limit` share the unit named in
/// `message`; both are 0 for purely structural findings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub ship_id: Option<u32>,
    pub epoch: Option<Epoch>,
    pub line: Option<usize>,
    pub measured: f64,
    pub limit: f64,
    pub message: String,
}

impl Violation {
    pub fn new(kind: ViolationKind, measured: f64, limit: f64, message: impl Into<String>) -> Self {
        Violation {
            kind,
            ship_id: None,
            epoch: None,
            line: None,
            measured,
            limit,
            message: message.into(),
        }
    }

    pub fn structural(message: impl Into<String>) -> Self {
        Violation::new(ViolationKind::Structural, 0.0, 0.0, message)
    }

    pub fn ship(mut self, ship_id: u32) -> Self {
        self.ship_id = Some(ship_id);
        self
    }

    pub fn at(mut self, epoch: Epoch) -> Self {
        self.epoch = Some(epoch);
        self
    }

    pub fn line(mut self, line: usize) -> Self {
        if line > 0 {
            self.line = Some(line);
        }
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.kind)?;
        if let Some(ship) = self.ship_id {
            write!(f, " ship {ship}")?;
        }
        if let Some(line) = self.line {
            write!(f, " line {line}")?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Worst leg mismatches of one ship.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ShipResiduals {
    pub ship_id: u32,
    pub legs: usize,
    /// km
    pub position: f64,
    /// km/s
    pub velocity: f64,
    /// kg
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub ledger: MiningLedger,
    pub per_ship_residuals: Vec<ShipResiduals>,
    pub score: ScoreBreakdown,
}

impl ValidationReport {
    fn assemble(
        violations: Vec<Violation>,
        ledger: MiningLedger,
        per_ship_residuals: Vec<ShipResiduals>,
        score: ScoreBreakdown,
    ) -> Self {
        ValidationReport {
            valid: violations.is_empty(),
            violations,
            ledger,
            per_ship_residuals,
            score,
        }
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Check every rule against a parsed document.
pub fn validate_solution(
    doc: &SolutionDocument,
    catalog: &AsteroidCatalog,
    config: &ValidationConfig,
) -> ValidationReport {
    let walk = |s| ship::validate_ship(s, catalog, config);
    let ships: Vec<ship::ShipReport> = if config.parallel {
        doc.ships.par_iter().map(walk).collect()
    } else {
        doc.ships.iter().map(walk).collect()
    };

    let mut violations = Vec::new();
    if doc.ships.is_empty() {
        violations.push(Violation::structural("no ships"));
    }
    let mut residuals = Vec::with_capacity(ships.len());
    for s in &ships {
        violations.extend(s.violations.iter().cloned());
        residuals.push(s.residuals);
    }

    let (ledger, ledger_violations) = ledger::merge(&ships, doc.ships.len(), config);
    violations.extend(ledger_violations);

    let score = score_with(&ledger, &config.bonus, &config.fleet, &config.mining);
    if !score.fleet_ok {
        violations.push(Violation::new(
            ViolationKind::FleetSize,
            score.ship_count as f64,
            f64::from(score.max_ships_allowed),
            format!(
                "{} ships used but {} allowed for {:.3} kg returned per ship",
                score.ship_count, score.max_ships_allowed, score.average_mass
            ),
        ));
    }
    ValidationReport::assemble(violations, ledger, residuals, score)
}

/// Report for a file that failed to parse: one structural violation per
/// diagnostic.
pub fn report_parse_error(err: &ParseError, config: &ValidationConfig) -> ValidationReport {
    let violations = err
        .diagnostics
        .iter()
        .map(|d| Violation::structural(d.message.clone()).line(d.line))
        .collect();
    let ledger = MiningLedger::default();
    let score = score_with(&ledger, &config.bonus, &config.fleet, &config.mining);
    ValidationReport::assemble(violations, ledger, Vec::new(), score)
}

/// Parse and validate raw file contents.
pub fn validate_bytes(
    bytes: &[u8],
    catalog: &AsteroidCatalog,
    config: &ValidationConfig,
) -> ValidationReport {
    match parse_solution_bytes(bytes) {
        Ok(doc) => validate_solution(&doc, catalog, config),
        Err(err) => report_parse_error(&err, config),
    }
}

/// Parse and validate file text.
pub fn validate_text(
    text: &str,
    catalog: &AsteroidCatalog,
    config: &ValidationConfig,
) -> ValidationReport {
    validate_bytes(text.as_bytes(), catalog, config)
}
