//! Build valid solutions to test the verifier against.
//!
//! Mining ships come from a search of the catalog for co-orbital asteroid
//! families with two Earth encounters in the mission window. The ship is
//! shot from the first encounter to the second, releases miners on the
//! family while still close to Earth, and collects them just before the
//! second encounter, where it unloads. Burn ships fly a thrusting loop that
//! returns to Earth after three years. All propagation goes through the
//! same leg routine as the verifier.

pub mod fixture;
mod perturb;
mod ships;
pub mod targets;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::AsteroidCatalog;
use crate::format::SolutionDocument;
use crate::scoring::{max_ship_count, FleetRule};
use crate::Vector3;

pub use fixture::{fixture_catalog, FixtureSpec};
pub use perturb::{perturb_solution, PerturbKind, PerturbSite, Perturbation};
pub use targets::{find_families, Encounter, TargetFamily};

/// Uniformly distributed unit vector.
pub(crate) fn random_unit(rng: &mut impl Rng) -> Vector3 {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    Vector3::new(s * phi.cos(), s * phi.sin(), z)
}

/// How burn ships thrust. Each arc gets one magnitude and a direction that
/// is held constant over `direction_segments` equal pieces of the arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThrustProgram {
    /// N, drawn uniformly per arc.
    pub magnitude: (f64, f64),
    /// Whole days of one-day samples per arc, before the final partial day.
    pub arc_days: (u32, u32),
    pub direction_segments: usize,
}

impl Default for ThrustProgram {
    fn default() -> Self {
        ThrustProgram {
            magnitude: (0.03, 0.15),
            arc_days: (3, 30),
            direction_segments: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisSpec {
    /// Ships in the solution.
    pub ships: usize,
    /// Ships 1..=mining_ships mine a family each.
    pub mining_ships: usize,
    /// Thrust arcs flown by each remaining ship; with zero they only launch.
    pub burns_per_leg: usize,
    /// Family members visited per mining ship.
    pub max_members: usize,
    pub thrust_program: ThrustProgram,
    pub seed: u64,
}

impl Default for SynthesisSpec {
    fn default() -> Self {
        SynthesisSpec {
            ships: 3,
            mining_ships: 1,
            burns_per_leg: 2,
            max_members: 9,
            thrust_program: ThrustProgram::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("a solution needs at least one ship and at most {max}")]
    ShipCount { max: usize },
    #[error("{requested} mining ships requested but only {built} could be built from the catalog")]
    Families { requested: usize, built: usize },
    #[error("ship {0}: no trajectory found")]
    NoTrajectory(u32),
    #[error(
        "{ships} ships need more cargo: {average:.1} kg unloaded per ship allows only {allowed}"
    )]
    Fleet {
        ships: usize,
        average: f64,
        allowed: u32,
    },
}

/// Holds the family search so many solutions can be drawn from one catalog.
pub struct Synthesizer<'a> {
    ctx: ships::Context<'a>,
    families: Vec<TargetFamily>,
}

impl<'a> Synthesizer<'a> {
    pub fn new(catalog: &'a AsteroidCatalog) -> Self {
        Synthesizer {
            ctx: ships::Context::new(catalog),
            families: find_families(catalog, targets::DEFAULT_MIN_SPAN_DAYS),
        }
    }

    pub fn families(&self) -> &[TargetFamily] {
        &self.families
    }

    pub fn synthesize(&self, spec: &SynthesisSpec) -> Result<SolutionDocument, SynthError> {
        let rule = FleetRule::default();
        if spec.ships == 0 || spec.ships > rule.hard_cap as usize {
            return Err(SynthError::ShipCount {
                max: rule.hard_cap as usize,
            });
        }
        let mining = spec.mining_ships.min(spec.ships);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut order: Vec<usize> = (0..self.families.len()).collect();
        // Longest stays (in whole years) first, shuffled within each year.
        order.shuffle(&mut rng);
        order.sort_by_key(|&i| std::cmp::Reverse(span_years(&self.families[i])));
        let mut families = order.into_iter();

        let mut doc = SolutionDocument::default();
        let mut unloaded = 0.0;
        for ship_id in 1..=spec.ships as u32 {
            let mut ship_rng = ChaCha8Rng::seed_from_u64(rng.random());
            let built = if (ship_id as usize) <= mining {
                families
                    .by_ref()
                    .find_map(|i| {
                        ships::mining_ship(
                            &self.ctx,
                            &mut ship_rng,
                            ship_id,
                            &self.families[i],
                            spec.max_members,
                        )
                    })
                    .ok_or(SynthError::Families {
                        requested: mining,
                        built: ship_id as usize - 1,
                    })?
            } else if spec.burns_per_leg > 0 {
                (0..20)
                    .find_map(|_| {
                        ships::burn_ship(
                            &self.ctx,
                            &mut ship_rng,
                            ship_id,
                            spec.burns_per_leg,
                            &spec.thrust_program,
                        )
                    })
                    .ok_or(SynthError::NoTrajectory(ship_id))?
            } else {
                ships::launch_only(&mut ship_rng, ship_id)
            };
            unloaded += built.unloaded;
            doc.ships.push(built.section);
        }

        let average = unloaded / spec.ships as f64;
        let allowed = max_ship_count(average, &rule);
        if (allowed as usize) < spec.ships {
            return Err(SynthError::Fleet {
                ships: spec.ships,
                average,
                allowed,
            });
        }
        Ok(doc)
    }
}

fn span_years(f: &TargetFamily) -> u32 {
    ((f.arrival.epoch.mjd() - f.departure.epoch.mjd()) / crate::catalog::constants::YEAR_DAYS)
        as u32
}

/// One-shot convenience: search `catalog` and build a solution.
pub fn synthesize_solution(
    spec: &SynthesisSpec,
    catalog: &AsteroidCatalog,
) -> Result<SolutionDocument, SynthError> {
    Synthesizer::new(catalog).synthesize(spec)
}
