//! Find asteroid families that a ballistic ship can reach from Earth and
//! bring back to Earth.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::catalog::constants::{AU_KM, MISSION_END, MISSION_START, MU_SUN, YEAR_DAYS};
use crate::catalog::{
    elements_to_state, AsteroidCatalog, Cartesian, Epoch, OrbitalElements, Planet,
};

/// Closest approach of an asteroid to Earth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Encounter {
    pub epoch: Epoch,
    /// km
    pub distance: f64,
    /// km/s
    pub vinf: f64,
}

/// Co-orbital asteroids with two Earth encounters far enough apart to
/// cover a full mining stay.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetFamily {
    pub members: Vec<u32>,
    pub departure: Encounter,
    pub arrival: Encounter,
}

const MAX_ENCOUNTER_KM: f64 = 300.0;
const MAX_ENCOUNTER_VINF: f64 = 5.8;
const SAME_ORBIT: f64 = 1e-5;

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn same_orbit(a: &OrbitalElements, b: &OrbitalElements) -> bool {
    (a.semi_major_axis - b.semi_major_axis).abs() / a.semi_major_axis < SAME_ORBIT
        && (a.eccentricity - b.eccentricity).abs() < SAME_ORBIT
        && (a.inclination - b.inclination).abs() < SAME_ORBIT
        && angle_gap(a.lan, b.lan) < SAME_ORBIT
        && angle_gap(a.arg_peri, b.arg_peri) < SAME_ORBIT
        && angle_gap(
            a.mean_anomaly_at(MU_SUN, MISSION_START),
            b.mean_anomaly_at(MU_SUN, MISSION_START),
        ) < SAME_ORBIT
}

fn crosses_earth(el: &OrbitalElements) -> bool {
    let q = el.semi_major_axis * (1.0 - el.eccentricity);
    let big_q = el.semi_major_axis * (1.0 + el.eccentricity);
    el.eccentricity < 1.0 && q < 1.05 * AU_KM && big_q > 0.95 * AU_KM
}

fn earth(t: Epoch) -> Cartesian {
    elements_to_state(&Planet::Earth.constants().elements, MU_SUN, t).expect("Earth ephemeris")
}

fn separation(el: &OrbitalElements, t: Epoch) -> Option<(f64, f64)> {
    let a = elements_to_state(el, MU_SUN, t).ok()?;
    let e = earth(t);
    Some((
        (a.position - e.position).norm(),
        (a.velocity - e.velocity).norm(),
    ))
}

/// Earth encounters inside the mission window, found on a daily grid and
/// refined by golden-section search.
pub fn earth_encounters(el: &OrbitalElements) -> Vec<Encounter> {
    let first = MISSION_START.mjd() + 2.0;
    let days = (MISSION_END.mjd() - 2.0 - first).floor() as usize;
    let d: Vec<f64> = (0..=days)
        .map(|k| separation(el, Epoch::from_mjd(first + k as f64)).map_or(f64::INFINITY, |s| s.0))
        .collect();
    let mut out = Vec::new();
    for k in 1..days {
        if !(d[k] <= d[k - 1] && d[k] < d[k + 1] && d[k] < 2.0e6) {
            continue;
        }
        let f = |x: f64| separation(el, Epoch::from_mjd(x)).map_or(f64::INFINITY, |s| s.0);
        let t = golden_min(f, first + k as f64 - 1.0, first + k as f64 + 1.0, 1e-9);
        if let Some((distance, vinf)) = separation(el, Epoch::from_mjd(t)) {
            if distance < MAX_ENCOUNTER_KM && vinf <= MAX_ENCOUNTER_VINF {
                out.push(Encounter {
                    epoch: Epoch::from_mjd(t),
                    distance,
                    vinf,
                });
            }
        }
    }
    out
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Group Earth-crossing asteroids into families sharing an orbit and keep
/// those with a usable pair of Earth encounters: the earliest and the latest,
/// at least `min_span_days` apart.
pub fn find_families(catalog: &AsteroidCatalog, min_span_days: f64) -> Vec<TargetFamily> {
    let candidates: Vec<(u32, &OrbitalElements)> =
        catalog.iter().filter(|(_, el)| crosses_earth(el)).collect();
    let mut taken = vec![false; candidates.len()];
    let mut groups = Vec::new();
    for i in 0..candidates.len() {
        if taken[i] {
            continue;
        }
        let mut members = vec![candidates[i].0];
        for j in i + 1..candidates.len() {
            if !taken[j] && same_orbit(candidates[i].1, candidates[j].1) {
                taken[j] = true;
                members.push(candidates[j].0);
            }
        }
        if members.len() >= 2 {
            groups.push((members, *candidates[i].1));
        }
    }
    let mut families: Vec<TargetFamily> = groups
        .into_par_iter()
        .filter_map(|(members, el)| {
            let enc = earth_encounters(&el);
            let (first, last) = (enc.first()?, enc.last()?);
            (last.epoch.mjd() - first.epoch.mjd() >= min_span_days).then_some(TargetFamily {
                members,
                departure: *first,
                arrival: *last,
            })
        })
        .collect();
    families.sort_by_key(|f| f.members[0]);
    families
}

/// Shortest span worth considering: a one-year stay plus room to visit
/// twenty asteroids on each side.
pub const DEFAULT_MIN_SPAN_DAYS: f64 = YEAR_DAYS + 90.0;
