//! Dormand–Prince 5(4) with local extrapolation and embedded error control.

pub(crate) const DIM: usize = 7;
pub(crate) type State = [f64; DIM];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth-order minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

pub(crate) struct Tolerance {
    pub abs: State,
    pub rel: f64,
}

pub(crate) enum Failure<E> {
    Underflow(f64),
    Rhs(E),
}

fn combine(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for i in 0..DIM {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// Integrate `y' = rhs(t, y)` from `t0` to exactly `t1 > t0`.
///
/// `h` is the first trial step and is updated with the last proposal so
/// consecutive calls continue smoothly. `observe` is called after every
/// accepted step.
#[allow(clippy::too_many_arguments)]
pub(crate) fn integrate<E>(
    rhs: &mut impl FnMut(f64, &State) -> Result<State, E>,
    t0: f64,
    y0: State,
    t1: f64,
    h: &mut f64,
    max_step: f64,
    min_step: f64,
    tol: &Tolerance,
    observe: &mut impl FnMut(f64, &State),
) -> Result<State, Failure<E>> {
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y).map_err(Failure::Rhs)?;
    let mut step = h.min(max_step).min(t1 - t0);
    let mut last_rejected = false;
    while t < t1 {
        let remaining = t1 - t;
        let finishing = step >= remaining;
        if finishing {
            step = remaining;
        } else if step < min_step {
            return Err(Failure::Underflow(t));
        }
        let k2 = rhs(t + C2 * step, &combine(&y, step, &[(A21, &k1)])).map_err(Failure::Rhs)?;
        let k3 = rhs(t + C3 * step, &combine(&y, step, &[(A31, &k1), (A32, &k2)]))
            .map_err(Failure::Rhs)?;
        let k4 = rhs(
            t + C4 * step,
            &combine(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        )
        .map_err(Failure::Rhs)?;
        let k5 = rhs(
            t + C5 * step,
            &combine(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )
        .map_err(Failure::Rhs)?;
        let k6 = rhs(
            t + step,
            &combine(
                &y,
                step,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        )
        .map_err(Failure::Rhs)?;
        let y_new = combine(
            &y,
            step,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let t_new = if finishing { t1 } else { t + step };
        let k7 = rhs(t_new, &y_new).map_err(Failure::Rhs)?;

        let mut err = 0.0f64;
        for i in 0..DIM {
            let e = step
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = tol.abs[i] + tol.rel * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() {
            err = 1e10;
        }

        if err <= 1.0 {
            t = t_new;
            y = y_new;
            k1 = k7;
            observe(t, &y);
            let mut factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            if last_rejected {
                factor = factor.min(1.0);
            }
            last_rejected = false;
            let proposal = (step * factor).min(max_step);
            // A truncated final step says nothing about the natural size.
            if !finishing || proposal > *h {
                *h = proposal;
            }
            step = proposal;
        } else {
            last_rejected = true;
            step *= (SAFETY * err.powf(-0.2)).max(MIN_FACTOR);
            if step < min_step {
                return Err(Failure::Underflow(t));
            }
        }
    }
    Ok(y)
}
