//! Burn propagation against independent references: a fixed-step RK4
//! integrator written here, the closed-form mass flow, and orbital energy.

use gtoc12_core::catalog::constants::{AU_KM, DAY_S, G0, MU_SUN};
use gtoc12_core::propagation::{coast_propagate, fly_leg};
use gtoc12_core::{
    interpolate_thrust, thrust_propagate, Epoch, IntegratorConfig, StateVector, ThrustProfile,
    Vector3,
};
use proptest::prelude::*;

const ISP: f64 = 4000.0;

type Y = [f64; 7];

fn deriv(y: &Y, thrust: Vector3) -> Y {
    let r = Vector3::new(y[0], y[1], y[2]);
    let a = -MU_SUN * r / r.norm().powi(3) + thrust / y[6] / 1000.0;
    [y[3], y[4], y[5], a.x, a.y, a.z, -thrust.norm() / (ISP * G0)]
}

fn axpy(y: &Y, h: f64, k: &Y) -> Y {
    std::array::from_fn(|i| y[i] + h * k[i])
}

/// Classical RK4 with thrust given as a function of seconds since start.
fn rk4(mut y: Y, duration: f64, steps: usize, thrust: impl Fn(f64) -> Vector3) -> Y {
    let h = duration / steps as f64;
    for n in 0..steps {
        let t = n as f64 * h;
        let k1 = deriv(&y, thrust(t));
        let k2 = deriv(&axpy(&y, h / 2.0, &k1), thrust(t + h / 2.0));
        let k3 = deriv(&axpy(&y, h / 2.0, &k2), thrust(t + h / 2.0));
        let k4 = deriv(&axpy(&y, h, &k3), thrust(t + h));
        y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    y
}

fn circular(r_au: f64, mass: f64) -> StateVector {
    let r = r_au * AU_KM;
    let v = (MU_SUN / r).sqrt();
    StateVector::new(
        Epoch::from_mjd(65000.0),
        Vector3::new(r, 0.0, 0.0),
        Vector3::new(0.0, v, 0.0),
        mass,
    )
}

fn daily_profile(
    start: Epoch,
    days: usize,
    last: f64,
    f: impl Fn(f64) -> Vector3,
) -> ThrustProfile {
    let mut s: Vec<(Epoch, Vector3)> = (0..=days)
        .map(|d| (start.add_days(d as f64), f(d as f64)))
        .collect();
    s.push((start.add_days(days as f64 + last), f(days as f64 + last)));
    ThrustProfile::new(s).unwrap()
}

fn to_y(s: &StateVector) -> Y {
    [
        s.position.x,
        s.position.y,
        s.position.z,
        s.velocity.x,
        s.velocity.y,
        s.velocity.z,
        s.mass,
    ]
}

#[test]
fn hundred_day_full_thrust_mass_loss() {
    let s = circular(1.0, 2000.0);
    let profile = daily_profile(s.epoch, 99, 1.0, |_| Vector3::new(0.0, 0.6, 0.0));
    let end = thrust_propagate(&s, &profile, &IntegratorConfig::default()).unwrap();
    let expected = 0.6 * 100.0 * DAY_S / (ISP * G0);
    assert!((expected - 132.155).abs() < 1e-3);
    assert!(
        (s.mass - end.mass - expected).abs() < 1e-6,
        "{}",
        s.mass - end.mass
    );
    assert!((end.epoch.mjd() - 65100.0).abs() < 1e-9);
}

#[test]
fn cubic_samples_are_reproduced() {
    let start = Epoch::from_mjd(65000.0);
    let profile = daily_profile(start, 4, 1.0, |t| Vector3::new(t.powi(3), t * t, 1.0 - t));
    let u = interpolate_thrust(&profile, start.add_days(1.5)).unwrap();
    assert!((u.x - 3.375).abs() < 1e-12);
    assert!((u.y - 2.25).abs() < 1e-12);
    assert!((u.z + 0.5).abs() < 1e-12);
}

#[test]
fn tangential_thrust_raises_orbit() {
    let s = circular(1.0, 1500.0);
    let v_hat = s.velocity.normalize();
    // Directions are fixed per sample; over 20 days the velocity turns by
    // about 20 degrees, so most of the thrust is still along-track.
    let profile = daily_profile(s.epoch, 19, 1.0, |_| 0.5 * v_hat);
    let end = thrust_propagate(&s, &profile, &IntegratorConfig::default()).unwrap();
    let energy = |s: &StateVector| s.velocity.norm_squared() / 2.0 - MU_SUN / s.position.norm();
    let a = |s: &StateVector| -MU_SUN / (2.0 * energy(s));
    assert!(a(&end) > a(&s) + 1.0e5, "a grew by {} km", a(&end) - a(&s));
}

#[test]
fn zero_thrust_matches_coast() {
    let s = circular(1.3, 1000.0);
    let s = StateVector {
        velocity: s.velocity + Vector3::new(0.5, -0.3, 0.8),
        ..s
    };
    let profile = daily_profile(s.epoch, 364, 0.25, |_| Vector3::zeros());
    let burn = thrust_propagate(&s, &profile, &IntegratorConfig::default()).unwrap();
    let coast = coast_propagate(&s, 364.25 * DAY_S).unwrap();
    assert!((burn.position - coast.position).norm() < 1e-3);
    assert!((burn.velocity - coast.velocity).norm() < 1e-9);
    assert_eq!(burn.mass, s.mass);
}

#[test]
fn leg_with_gap_matches_rk4() {
    let s = circular(1.1, 1800.0);
    let arc_start = s.epoch.add_days(5.0);
    let u = Vector3::new(0.1, -0.2, 0.05);
    let profile = daily_profile(arc_start, 10, 0.5, |_| u);
    let end = s.epoch.add_days(30.0);
    let out = fly_leg(
        &s,
        std::slice::from_ref(&profile),
        end,
        &IntegratorConfig::default(),
    )
    .unwrap()
    .state;
    // Phase by phase, so no RK4 step straddles a thrust switch.
    let y = rk4(to_y(&s), 5.0 * DAY_S, 5 * 288, |_| Vector3::zeros());
    let y = rk4(y, 10.5 * DAY_S, 21 * 144, |_| u);
    let y = rk4(y, 14.5 * DAY_S, 29 * 144, |_| Vector3::zeros());
    let got = to_y(&out);
    assert!((Vector3::new(got[0], got[1], got[2]) - Vector3::new(y[0], y[1], y[2])).norm() < 1.0);
    assert!((got[6] - y[6]).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Linearly varying thrust is interpolated exactly, so the adaptive
    /// integrator and a fine RK4 must agree.
    #[test]
    fn burn_agrees_with_rk4(
        r_au in 0.8f64..2.5,
        m0 in 800.0f64..3000.0,
        days in 2usize..20,
        last in 0.1f64..1.0,
        a in prop::array::uniform3(-0.3f64..0.3),
        b in prop::array::uniform3(-0.01f64..0.01),
    ) {
        let s = circular(r_au, m0);
        let (a, b) = (Vector3::from(a), Vector3::from(b));
        let profile = daily_profile(s.epoch, days, last, |t| a + t * b);
        let end = thrust_propagate(&s, &profile, &IntegratorConfig::default()).unwrap();
        let total = days as f64 + last;
        let y = rk4(to_y(&s), total * DAY_S, (total * 144.0).ceil() as usize, |t| a + (t / DAY_S) * b);
        let got = to_y(&end);
        let dr = (Vector3::new(got[0], got[1], got[2]) - Vector3::new(y[0], y[1], y[2])).norm();
        let dv = (Vector3::new(got[3], got[4], got[5]) - Vector3::new(y[3], y[4], y[5])).norm();
        prop_assert!(dr < 1e-2, "dr = {dr}");
        prop_assert!(dv < 1e-8, "dv = {dv}");
        prop_assert!((got[6] - y[6]).abs() < 1e-8);
    }
}
