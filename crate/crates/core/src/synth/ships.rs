//! Ship builders. Every state written to a file comes out of `fly_leg`, the
//! same propagation the verifier runs, so legs close to machine precision.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::fixture::resonant_orbit;
use super::targets::TargetFamily;
use super::{random_unit, ThrustProgram};
use crate::catalog::constants::{MISSION_END, MISSION_START, MU_SUN, YEAR_DAYS};
use crate::catalog::{
    body_state, elements_to_state, AsteroidCatalog, Body, Cartesian, Epoch, Planet,
};
use crate::format::{BurnArc, Event, EventKind, ShipSection, StateEvent, StateRecord};
use crate::propagation::{fly_leg, IntegratorConfig, StateVector, ThrustProfile};
use crate::scoring::MiningRule;
use crate::verifier::{max_turn_angle, MassModel};
use crate::Vector3;

/// Fraction of each tolerance the synthesizer allows itself.
const MARGIN: f64 = 0.4;
const MAX_VINF: f64 = 5.9;

pub(crate) struct Context<'a> {
    pub catalog: &'a AsteroidCatalog,
    pub integrator: IntegratorConfig,
    pub mass: MassModel,
    pub mining: MiningRule,
    pub pos_tol: f64,
    pub vel_tol: f64,
}

pub(crate) struct Built {
    pub section: ShipSection,
    /// Cargo dropped at Earth, kg.
    pub unloaded: f64,
}

fn earth(t: Epoch) -> Cartesian {
    elements_to_state(&Planet::Earth.constants().elements, MU_SUN, t).expect("Earth ephemeris")
}

fn pair(kind: EventKind, pre: &StateVector, post: &StateVector) -> Event {
    Event::State(StateEvent {
        kind,
        pre: StateRecord::from_state(pre),
        post: StateRecord::from_state(post),
    })
}

fn launch_event(t: Epoch, e: &Cartesian, v0: Vector3, m0: f64) -> (Event, StateVector) {
    let pre = StateVector::new(t, e.position, e.velocity, m0);
    let post = StateVector::new(t, e.position, v0, m0);
    (pair(EventKind::Launch, &pre, &post), post)
}

/// Turn `v` by `angle` about a random axis perpendicular to it.
fn turn(rng: &mut impl Rng, v: &Vector3, angle: f64) -> Vector3 {
    let axis = loop {
        let k = random_unit(rng).cross(v);
        if k.norm() > 1e-3 * v.norm() {
            break k.normalize();
        }
    };
    v * angle.cos() + axis.cross(v) * angle.sin()
}

/// Earth flyby that keeps v-infinity and turns it by a fraction of the
/// allowed angle. Returns None if the ship is not close enough to Earth.
fn earth_flyby(
    ctx: &Context,
    rng: &mut impl Rng,
    pre: &StateVector,
    drop: f64,
) -> Option<(Event, f64)> {
    let e = earth(pre.epoch);
    if (pre.position - e.position).norm() > ctx.pos_tol {
        return None;
    }
    let vin = pre.velocity - e.velocity;
    let limit = max_turn_angle(Planet::Earth.constants(), vin.norm());
    let angle = rng.random_range(0.2..0.5) * limit;
    let vout = turn(rng, &vin, angle);
    let post = StateVector {
        velocity: e.velocity + vout,
        mass: pre.mass - drop,
        ..*pre
    };
    Some((
        pair(EventKind::Flyby(Planet::Earth), pre, &post),
        vin.norm(),
    ))
}

/// Gauss-Newton on a control vector with a finite-difference Jacobian
/// (step `h[i]` per component) and an SVD pseudo-inverse, so directions
/// that do not move the arrival point are left alone. `miss` returns the
/// arrival position error in km.
pub(crate) fn shoot(
    guess: &[f64],
    h: &[f64],
    miss: impl Fn(&DVector<f64>) -> Option<Vector3>,
) -> Option<DVector<f64>> {
    let n = guess.len();
    let mut x = DVector::from_column_slice(guess);
    let mut f = miss(&x)?;
    for _ in 0..40 {
        if f.norm() < 1e-4 {
            return Some(x);
        }
        let mut jac = DMatrix::<f64>::zeros(3, n);
        for i in 0..n {
            let mut w = x.clone();
            w[i] += h[i];
            jac.set_column(i, &((miss(&w)? - f) / h[i]));
        }
        let svd = jac.svd(true, true);
        let eps = 1e-9 * svd.singular_values.max();
        let rhs = DVector::from_column_slice((-f).as_slice());
        let step = svd.solve(&rhs, eps).ok()?;
        let mut lambda = 1.0;
        loop {
            let cand = &x + lambda * &step;
            if let Some(fc) = miss(&cand) {
                if fc.norm() < f.norm() {
                    x = cand;
                    f = fc;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-4 {
                return (f.norm() < 1e-3).then_some(x);
            }
        }
    }
    (f.norm() < 1e-3).then_some(x)
}

fn matches(ctx: &Context, ship: &StateVector, body: &Cartesian) -> bool {
    (ship.position - body.position).norm() <= ctx.pos_tol
        && (ship.velocity - body.velocity).norm() <= ctx.vel_tol
}

/// Launch on a family's departure encounter, release miners on up to
/// `max_members` members one every two days, ride along, pick them up in
/// the days before the arrival encounter and unload at Earth.
pub(crate) fn mining_ship(
    ctx: &Context,
    rng: &mut impl Rng,
    ship_id: u32,
    family: &TargetFamily,
    max_members: usize,
) -> Option<Built> {
    let t_l = family.departure.epoch;
    let e_l = earth(t_l);
    let guess = body_state(ctx.catalog, Body::Asteroid(family.members[0]), t_l)
        .ok()?
        .velocity;
    let coast = |v: &Vector3, t: Epoch| {
        fly_leg(
            &StateVector::new(t_l, e_l.position, *v, 1000.0),
            &[],
            t,
            &ctx.integrator,
        )
        .ok()
        .map(|o| o.state)
    };
    // Launch velocity and return epoch together.
    let x = shoot(
        &[guess.x, guess.y, guess.z, family.arrival.epoch.mjd()],
        &[1e-6; 4],
        |x| {
            let t = Epoch::from_mjd(x[3]);
            coast(&Vector3::new(x[0], x[1], x[2]), t).map(|s| s.position - earth(t).position)
        },
    )?;
    let (v0, t_f) = (Vector3::new(x[0], x[1], x[2]), Epoch::from_mjd(x[3]));
    if (v0 - e_l.velocity).norm() > MAX_VINF || !t_f.in_mission_window() {
        return None;
    }

    let mut chosen: Vec<(u32, Epoch, Epoch)> = Vec::new();
    for &id in &family.members {
        let k = chosen.len();
        if k >= max_members.min(ctx.mass.max_miners as usize) {
            break;
        }
        let td = t_l.add_days(1.0 + 2.0 * k as f64);
        let tr = t_f.add_days(-1.0 - 2.0 * k as f64);
        if (tr.mjd() - td.mjd()) / YEAR_DAYS < ctx.mining.min_stay + 0.01 {
            break;
        }
        let ok = [td, tr].iter().all(|&t| {
            match (
                coast(&v0, t),
                body_state(ctx.catalog, Body::Asteroid(id), t),
            ) {
                (Some(s), Ok(b)) => matches(ctx, &s, &b),
                _ => false,
            }
        });
        if ok {
            chosen.push((id, td, tr));
        }
    }
    if chosen.is_empty() {
        return None;
    }

    let m0 = ctx.mass.dry_mass
        + ctx.mass.miner_mass * chosen.len() as f64
        + rng.random_range(200.0..800.0);
    let (launch, mut post) = launch_event(t_l, &e_l, v0, m0);
    let mut events = vec![launch];

    enum Step {
        Deploy(u32),
        Retrieve(u32, f64),
    }
    let mut plan: Vec<(Epoch, Step)> = chosen
        .iter()
        .map(|&(id, td, _)| (td, Step::Deploy(id)))
        .collect();
    for &(id, td, tr) in chosen.iter().rev() {
        let stay = (tr.mjd() - td.mjd()) / YEAR_DAYS;
        let cap = ctx.mining.cap(stay).ok()?;
        plan.push((tr, Step::Retrieve(id, 0.95 * cap)));
    }

    let mut carried = 0.0;
    for (t, step) in plan {
        let pre = fly_leg(&post, &[], t, &ctx.integrator).ok()?.state;
        let (id, mass) = match step {
            Step::Deploy(id) => (id, pre.mass - ctx.mass.miner_mass),
            Step::Retrieve(id, m) => (id, pre.mass + m),
        };
        let body = body_state(ctx.catalog, Body::Asteroid(id), t).ok()?;
        if !matches(ctx, &pre, &body) {
            return None;
        }
        post = StateVector { mass, ..pre };
        if let Step::Retrieve(..) = step {
            carried += post.mass - pre.mass;
        }
        events.push(pair(EventKind::Rendezvous(id), &pre, &post));
    }
    let pre = fly_leg(&post, &[], t_f, &ctx.integrator).ok()?.state;
    let (flyby, vinf) = earth_flyby(ctx, rng, &pre, carried)?;
    if vinf > MAX_VINF {
        return None;
    }
    events.push(flyby);
    Some(Built {
        section: ShipSection { ship_id, events },
        unloaded: carried,
    })
}

fn earth_period_days() -> f64 {
    Planet::Earth.constants().elements.period(MU_SUN) / 86400.0
}

/// Thrust arcs spread over `[from, to]`, one per equal slot, each with a
/// piecewise-constant direction schedule.
fn arcs(
    rng: &mut impl Rng,
    from: Epoch,
    to: Epoch,
    count: usize,
    program: &ThrustProgram,
) -> Vec<Vec<(Epoch, Vector3)>> {
    let slot = (to.mjd() - from.mjd()) / count as f64;
    let longest = (program.arc_days.1 as f64).min(slot - 3.0).max(1.0) as u32;
    let shortest = program.arc_days.0.clamp(1, longest);
    (0..count)
        .map(|i| {
            let days = rng.random_range(shortest..=longest);
            let frac = rng.random_range(0.2..0.9);
            let room = slot - days as f64 - 2.0;
            let start = from.mjd() + slot * i as f64 + rng.random_range(0.0..room.max(0.5));
            let magnitude = rng.random_range(program.magnitude.0..=program.magnitude.1);
            let segments = program.direction_segments.max(1);
            let directions: Vec<Vector3> = (0..segments).map(|_| random_unit(rng)).collect();
            let total = days as f64 + frac;
            let sample = |j: f64| {
                let k = ((j / total * segments as f64) as usize).min(segments - 1);
                directions[k] * magnitude
            };
            let mut s: Vec<(Epoch, Vector3)> = (0..=days)
                .map(|j| (Epoch::from_mjd(start + j as f64), sample(j as f64)))
                .collect();
            s.push((Epoch::from_mjd(start + total), sample(total)));
            s
        })
        .collect()
}

/// Launch, thrust arcs, and an Earth flyby three Earth years later.
pub(crate) fn burn_ship(
    ctx: &Context,
    rng: &mut impl Rng,
    ship_id: u32,
    burns: usize,
    program: &ThrustProgram,
) -> Option<Built> {
    let span = 3.0 * earth_period_days();
    let t_l = Epoch::from_mjd(
        rng.random_range(MISSION_START.mjd() + 10.0..MISSION_END.mjd() - span - 10.0),
    );
    let t_f = t_l.add_days(span);
    let (e_l, e_f) = (earth(t_l), earth(t_f));
    let (el, _) = resonant_orbit(rng, t_l, 3.6..4.8);
    let v0 = elements_to_state(&el, MU_SUN, t_l).ok()?.velocity;
    let samples = arcs(rng, t_l.add_days(10.0), t_f.add_days(-60.0), burns, program);
    let last = samples.len() - 1;
    // Arcs scaled by `k`, with `offset` (N) added to every sample of the
    // last one.
    let profiles = |k: f64, offset: &Vector3| -> Option<Vec<ThrustProfile>> {
        samples
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let extra = if i == last { *offset } else { Vector3::zeros() };
                ThrustProfile::new(s.iter().map(|&(t, u)| (t, k * u + extra))).ok()
            })
            .collect()
    };
    let m0 = rng.random_range(1200.0..2500.0);
    let fly = |p: &[ThrustProfile]| {
        fly_leg(
            &StateVector::new(t_l, e_l.position, v0, m0),
            p,
            t_f,
            &ctx.integrator,
        )
        .ok()
        .map(|o| o.state)
    };
    // The resonant coast already returns to Earth. Raise the thrust in
    // steps and let the last arc absorb the miss, each solution seeding the
    // next. Launch velocity is no use as a control here: on a resonant
    // return only its magnitude moves the arrival point.
    let mut offset = Vector3::zeros();
    for step in 1..=4 {
        let k = f64::from(step) / 4.0;
        let c = shoot(offset.as_slice(), &[1e-4; 3], |c| {
            fly(&profiles(k, &Vector3::new(c[0], c[1], c[2]))?).map(|s| s.position - e_f.position)
        })?;
        offset = Vector3::new(c[0], c[1], c[2]);
    }
    let samples: Vec<Vec<(Epoch, Vector3)>> = samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let extra = if i == last { offset } else { Vector3::zeros() };
            s.iter().map(|&(t, u)| (t, u + extra)).collect()
        })
        .collect();
    if samples.iter().flatten().any(|(_, u)| u.norm() > 0.59) {
        return None;
    }
    let profiles: Vec<ThrustProfile> = samples
        .iter()
        .map(|s| ThrustProfile::new(s.iter().copied()))
        .collect::<Result<_, _>>()
        .ok()?;
    let (launch, post) = launch_event(t_l, &e_l, v0, m0);
    let mut events = vec![launch];
    events.extend(
        samples
            .iter()
            .map(|s| Event::Burn(BurnArc::from_samples(s))),
    );
    let pre = fly_leg(&post, &profiles, t_f, &ctx.integrator).ok()?.state;
    let (flyby, _) = earth_flyby(ctx, rng, &pre, 0.0)?;
    events.push(flyby);
    Some(Built {
        section: ShipSection { ship_id, events },
        unloaded: 0.0,
    })
}

/// A launch and nothing else.
pub(crate) fn launch_only(rng: &mut impl Rng, ship_id: u32) -> Built {
    let t = Epoch::from_mjd(rng.random_range(MISSION_START.mjd() + 1.0..MISSION_END.mjd() - 1.0));
    let e = earth(t);
    let v0 = e.velocity + rng.random_range(0.5..5.5) * random_unit(rng);
    let (launch, _) = launch_event(t, &e, v0, rng.random_range(600.0..2900.0));
    Built {
        section: ShipSection {
            ship_id,
            events: vec![launch],
        },
        unloaded: 0.0,
    }
}

impl Context<'_> {
    pub(crate) fn new(catalog: &AsteroidCatalog) -> Context<'_> {
        let tol = crate::verifier::ToleranceSet::default();
        Context {
            catalog,
            integrator: IntegratorConfig::default(),
            mass: MassModel::default(),
            mining: MiningRule::default(),
            pos_tol: MARGIN * tol.pos,
            vel_tol: MARGIN * tol.vel,
        }
    }
}
