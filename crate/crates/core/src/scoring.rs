//! Mining caps, bonus coefficients, the fleet-size rule and the merit
//! function J.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::constants::YEAR_DAYS;
use crate::catalog::Epoch;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MiningRule {
    /// kg per year of stay
    pub rate_k: f64,
    /// years
    pub min_stay: f64,
}

impl Default for MiningRule {
    fn default() -> Self {
        MiningRule {
            rate_k: 10.0,
            min_stay: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("stay of {stay} years is shorter than the {min} year minimum")]
pub struct InfeasibleStay {
    pub stay: f64,
    pub min: f64,
}

impl MiningRule {
    pub fn cap(&self, stay_years: f64) -> Result<f64, InfeasibleStay> {
        if stay_years >= self.min_stay {
            Ok(self.rate_k * stay_years)
        } else {
            Err(InfeasibleStay {
                stay: stay_years,
                min: self.min_stay,
            })
        }
    }
}

/// Largest mass (kg) a miner collects over `stay_years`.
pub fn mining_cap(stay_years: f64) -> Result<f64, InfeasibleStay> {
    MiningRule::default().cap(stay_years)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BonusMode {
    /// Every asteroid weighs `b0`.
    #[default]
    Static,
    /// Decays with the solution's own total collected mass.
    Dynamic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BonusModel {
    pub mode: BonusMode,
    /// 1/kg
    pub beta: f64,
    pub gamma: f64,
    pub b0: f64,
}

impl BonusModel {
    pub const STATIC: BonusModel = BonusModel {
        mode: BonusMode::Static,
        beta: 0.05,
        gamma: -0.1,
        b0: 1.0,
    };

    pub const DYNAMIC: BonusModel = BonusModel {
        mode: BonusMode::Dynamic,
        ..BonusModel::STATIC
    };

    pub fn with_mode(mode: BonusMode) -> BonusModel {
        match mode {
            BonusMode::Static => BonusModel::STATIC,
            BonusMode::Dynamic => BonusModel::DYNAMIC,
        }
    }
}

impl Default for BonusModel {
    fn default() -> Self {
        BonusModel::STATIC
    }
}

/// Bonus coefficient given the total mined mass `total_kg` it decays with.
pub fn bonus(model: &BonusModel, total_kg: f64) -> f64 {
    match model.mode {
        BonusMode::Static => model.b0,
        BonusMode::Dynamic => (1.0 + 2.0 * (1.0 + model.beta * total_kg).powf(model.gamma)) / 3.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FleetRule {
    /// 1/kg
    pub rho: f64,
    pub hard_cap: u32,
}

impl Default for FleetRule {
    fn default() -> Self {
        FleetRule {
            rho: 0.004,
            hard_cap: 100,
        }
    }
}

/// Ships allowed when each returns `avg_mass` kg on average:
/// `floor(min(cap, 2·exp(rho·avg_mass)))`.
pub fn max_ship_count(avg_mass: f64, rule: &FleetRule) -> u32 {
    let allowed = 2.0 * (rule.rho * avg_mass.max(0.0)).exp();
    allowed.min(f64::from(rule.hard_cap)).floor() as u32
}

/// One ship's visit to an asteroid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Visit {
    pub ship_id: u32,
    pub epoch: Epoch,
}

/// What happened at one asteroid over the whole solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsteroidRecord {
    pub asteroid: u32,
    pub deploy: Option<Visit>,
    pub retrieve: Option<Visit>,
    /// kg taken aboard at retrieval
    pub collected: f64,
    /// Epoch of the Earth flyby that unloaded this asteroid's mass.
    pub unloaded: Option<Epoch>,
}

impl AsteroidRecord {
    pub fn new(asteroid: u32) -> Self {
        AsteroidRecord {
            asteroid,
            deploy: None,
            retrieve: None,
            collected: 0.0,
            unloaded: None,
        }
    }

    /// Years between deployment and retrieval.
    pub fn stay_years(&self) -> Option<f64> {
        let (d, r) = (self.deploy?, self.retrieve?);
        Some((r.epoch.mjd() - d.epoch.mjd()) / YEAR_DAYS)
    }
}

/// Per-asteroid outcome of a validation run plus the fleet size.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct MiningLedger {
    pub ship_count: usize,
    pub asteroids: BTreeMap<u32, AsteroidRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsteroidScore {
    pub asteroid: u32,
    /// kg
    pub collected: f64,
    /// None when the stay is below the minimum.
    pub cap: Option<f64>,
    pub bonus: f64,
    pub contribution: f64,
    pub cap_exceeded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreBreakdown {
    pub per_asteroid: Vec<AsteroidScore>,
    /// Weighted collected mass, kg.
    pub total_j: f64,
    /// Unloaded mass per ship (bonus not applied), kg.
    pub average_mass: f64,
    pub ship_count: usize,
    pub max_ships_allowed: u32,
    pub fleet_ok: bool,
}

/// Merit function over a ledger. Only asteroids whose mass was retrieved
/// and then unloaded at Earth count. Cap breaches are flagged, not clamped.
pub fn score(ledger: &MiningLedger, model: &BonusModel, rule: &FleetRule) -> ScoreBreakdown {
    score_with(ledger, model, rule, &MiningRule::default())
}

pub fn score_with(
    ledger: &MiningLedger,
    model: &BonusModel,
    rule: &FleetRule,
    mining: &MiningRule,
) -> ScoreBreakdown {
    let counted: Vec<&AsteroidRecord> = ledger
        .asteroids
        .values()
        .filter(|r| r.retrieve.is_some() && r.unloaded.is_some())
        .collect();
    let raw_total: f64 = counted.iter().map(|r| r.collected).sum();
    let b = bonus(model, raw_total);
    let per_asteroid: Vec<AsteroidScore> = counted
        .iter()
        .map(|r| {
            let cap = r.stay_years().and_then(|s| mining.cap(s).ok());
            AsteroidScore {
                asteroid: r.asteroid,
                collected: r.collected,
                cap,
                bonus: b,
                contribution: b * r.collected,
                cap_exceeded: cap.is_none_or(|c| r.collected > c),
            }
        })
        .collect();
    let total_j = per_asteroid.iter().map(|a| a.contribution).sum();
    let average_mass = if ledger.ship_count == 0 {
        0.0
    } else {
        raw_total / ledger.ship_count as f64
    };
    let max_ships_allowed = max_ship_count(average_mass, rule);
    ScoreBreakdown {
        per_asteroid,
        total_j,
        average_mass,
        ship_count: ledger.ship_count,
        max_ships_allowed,
        fleet_ok: ledger.ship_count <= max_ships_allowed as usize,
    }
}
