//! Synthetic asteroid catalog for tests and benchmarks.
//!
//! Most rows are main-belt background written at seven significant digits,
//! like the competition file. A few dozen small families are planted on an
//! Earth-resonant orbit (period 1.5 Earth years) that passes through Earth at
//! a chosen epoch, so the family is reachable at launch and again every
//! three Earth years. Family members share the semi-major axis and differ
//! from each other by a few hundred km in position.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::random_unit;
use crate::catalog::constants::{AU_KM, DEG, MAX_ASTEROID_ID, MU_SUN};
use crate::catalog::{
    elements_to_state, state_to_elements, AsteroidCatalog, Epoch, OrbitalElements, Planet,
};

/// Epoch of every fixture row.
pub const FIXTURE_EPOCH: Epoch = Epoch::from_mjd(64328.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureSpec {
    pub rows: usize,
    pub families: usize,
    pub family_size: usize,
    pub seed: u64,
}

impl Default for FixtureSpec {
    fn default() -> Self {
        FixtureSpec {
            rows: MAX_ASTEROID_ID as usize,
            families: 24,
            family_size: 12,
            seed: 12,
        }
    }
}

/// Semi-major axis with a period of exactly 1.5 Earth periods.
pub fn resonant_semi_major_axis() -> f64 {
    Planet::Earth.constants().elements.semi_major_axis * 1.5f64.powf(2.0 / 3.0)
}

/// Heliocentric speed needed at `r` for semi-major axis `a`.
fn vis_viva(r: f64, a: f64) -> f64 {
    (MU_SUN * (2.0 / r - 1.0 / a)).sqrt()
}

fn round_sig(x: f64, digits: usize) -> f64 {
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

fn background(rng: &mut ChaCha8Rng) -> OrbitalElements {
    let r7 = |x: f64| round_sig(x, 7);
    OrbitalElements {
        semi_major_axis: r7(rng.random_range(2.0..3.5)) * AU_KM,
        eccentricity: r7(rng.random_range(0.0..0.25)),
        inclination: r7(rng.random_range(0.0..20.0)) * DEG,
        lan: r7(rng.random_range(0.0..360.0)) * DEG,
        arg_peri: r7(rng.random_range(0.0..360.0)) * DEG,
        mean_anomaly: r7(rng.random_range(0.0..360.0)) * DEG,
        epoch: FIXTURE_EPOCH,
    }
}

/// Speed along `u` to add to `v_earth` so the result has magnitude
/// `speed`, if it is positive.
pub(crate) fn excess_along(
    v_earth: &crate::Vector3,
    u: &crate::Vector3,
    speed: f64,
) -> Option<f64> {
    let b = v_earth.dot(u);
    let disc = b * b + speed * speed - v_earth.norm_squared();
    (disc >= 0.0).then(|| -b + disc.sqrt()).filter(|s| *s > 0.0)
}

/// Orbit leaving Earth at `t` with v-infinity in `vinf_range` and a period
/// of 1.5 Earth years, expressed at `epoch`.
pub(crate) fn resonant_orbit(
    rng: &mut impl Rng,
    t: Epoch,
    vinf_range: std::ops::Range<f64>,
) -> (OrbitalElements, f64) {
    let earth =
        elements_to_state(&Planet::Earth.constants().elements, MU_SUN, t).expect("Earth ephemeris");
    let a = resonant_semi_major_axis();
    let speed = vis_viva(earth.position.norm(), a);
    loop {
        let u = random_unit(rng);
        let Some(s) = excess_along(&earth.velocity, &u, speed) else {
            continue;
        };
        if !vinf_range.contains(&s) {
            continue;
        }
        let state = crate::catalog::Cartesian {
            position: earth.position,
            velocity: earth.velocity + s * u,
        };
        if let Ok(mut el) = state_to_elements(&state, MU_SUN, t) {
            el.semi_major_axis = a;
            return (el, s);
        }
    }
}

fn family(rng: &mut ChaCha8Rng, size: usize) -> Vec<OrbitalElements> {
    let t = Epoch::from_mjd(rng.random_range(64340.0..67600.0));
    let (center, _) = resonant_orbit(rng, t, 3.4..5.5);
    let n = center.mean_motion(MU_SUN);
    let at_fixture_epoch = OrbitalElements {
        mean_anomaly: (center.mean_anomaly - n * t.seconds_since(FIXTURE_EPOCH)).rem_euclid(TAU),
        epoch: FIXTURE_EPOCH,
        ..center
    };
    const SPREAD: f64 = 3e-7;
    (0..size)
        .map(|_| {
            let mut jitter = || rng.random_range(-SPREAD..SPREAD);
            OrbitalElements {
                eccentricity: (at_fixture_epoch.eccentricity + jitter()).abs(),
                inclination: (at_fixture_epoch.inclination + jitter()).abs(),
                lan: (at_fixture_epoch.lan + jitter()).rem_euclid(TAU),
                arg_peri: (at_fixture_epoch.arg_peri + jitter()).rem_euclid(TAU),
                mean_anomaly: (at_fixture_epoch.mean_anomaly + jitter()).rem_euclid(TAU),
                ..at_fixture_epoch
            }
        })
        .collect()
}

/// Generate a catalog with `spec.rows` asteroids, IDs `1..=rows`, of which
/// `families × family_size` (at random IDs) belong to planted families.
pub fn fixture_catalog(spec: &FixtureSpec) -> AsteroidCatalog {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let rows = spec.rows.min(MAX_ASTEROID_ID as usize);
    let mut ids: Vec<u32> = (1..=rows as u32).collect();
    ids.shuffle(&mut rng);
    let planted = (spec.families * spec.family_size).min(rows);
    let mut slots: Vec<Option<OrbitalElements>> = vec![None; rows + 1];
    let mut members = ids[..planted].iter();
    for _ in 0..spec.families {
        for el in family(&mut rng, spec.family_size) {
            match members.next() {
                Some(&id) => slots[id as usize] = Some(el),
                None => break,
            }
        }
    }
    for &id in &ids[planted..] {
        slots[id as usize] = Some(background(&mut rng));
    }
    AsteroidCatalog::from_entries(
        slots
            .into_iter()
            .enumerate()
            .filter_map(|(id, el)| el.map(|el| (id as u32, el))),
    )
    .expect("fixture rows are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonant_period() {
        let el = OrbitalElements {
            semi_major_axis: resonant_semi_major_axis(),
            ..Planet::Earth.constants().elements
        };
        let ratio = el.period(MU_SUN) / Planet::Earth.constants().elements.period(MU_SUN);
        assert!((ratio - 1.5).abs() < 1e-12);
    }

    #[test]
    fn small_fixture_is_deterministic() {
        let spec = FixtureSpec {
            rows: 500,
            families: 3,
            family_size: 4,
            seed: 7,
        };
        let a = fixture_catalog(&spec);
        assert_eq!(a.len(), 500);
        assert_eq!(a, fixture_catalog(&spec));
        let resonant = a
            .iter()
            .filter(|(_, el)| (el.semi_major_axis - resonant_semi_major_axis()).abs() < 1.0)
            .count();
        assert_eq!(resonant, 12);
    }

    #[test]
    fn family_passes_earth() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = Epoch::from_mjd(65000.0);
        let (el, vinf) = resonant_orbit(&mut rng, t, 3.4..5.5);
        let earth = elements_to_state(&Planet::Earth.constants().elements, MU_SUN, t).unwrap();
        let s = elements_to_state(&el, MU_SUN, t).unwrap();
        assert!((s.position - earth.position).norm() < 1e-3);
        assert!(((s.velocity - earth.velocity).norm() - vinf).abs() < 1e-6);
        let period = Planet::Earth.constants().elements.period(MU_SUN) / 86400.0;
        let later = t.add_days(3.0 * period);
        let earth2 = elements_to_state(&Planet::Earth.constants().elements, MU_SUN, later).unwrap();
        let s2 = elements_to_state(&el, MU_SUN, later).unwrap();
        assert!((s2.position - earth2.position).norm() < 1.0);
    }
}
