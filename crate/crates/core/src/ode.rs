//! Adaptive Dormand–Prince 5(4) integration and the shooting oracle for the
//! angular ODE `y'' = ((a-1)(1 - y² - y'²) - y²) / y`.

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Integration stops before `y` drops below this.
pub const MIN_PROFILE_HEIGHT: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-13,
            max_steps: 200_000,
        }
    }
}

type State = [f64; 2];

// Dormand–Prince tableau
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
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrates a two-dimensional system from `t0` through the sorted
/// `targets` (all on one side of `t0`), returning the state at each target.
pub fn integrate_to<F>(f: F, t0: f64, y0: State, targets: &[f64], ctl: StepControl) -> Result<Vec<State>>
where
    F: Fn(f64, &State) -> Result<State>,
{
    let mut out = Vec::with_capacity(targets.len());
    let Some(&last) = targets.last() else {
        return Ok(out);
    };
    let dir = if last >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * 1e-3 * (last - t0).abs().max(1e-3);
    let mut k1 = f(t, &y)?;
    let mut steps = 0usize;
    for &target in targets {
        if (target - t) * dir < 0.0 {
            return domain("integration targets must be monotone away from the start");
        }
        while (target - t) * dir > 0.0 {
            steps += 1;
            if steps > ctl.max_steps {
                return Err(Error::StepFailure(format!("step budget exhausted near t = {t}")));
            }
            let hit = (target - t) * dir <= h.abs();
            let step = if hit { target - t } else { h };
            let k2 = f(t + C2 * step, &axpy(&y, &[(A21, &k1)], step))?;
            let k3 = f(t + C3 * step, &axpy(&y, &[(A31, &k1), (A32, &k2)], step))?;
            let k4 = f(t + C4 * step, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], step))?;
            let k5 = f(
                t + C5 * step,
                &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], step),
            )?;
            let k6 = f(
                t + step,
                &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], step),
            )?;
            let next = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], step);
            let k7 = f(t + step, &next)?;
            let mut err = 0.0f64;
            for i in 0..2 {
                let e = step
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = ctl.atol + ctl.rtol * y[i].abs().max(next[i].abs());
                err = err.max((e / scale).abs());
            }
            if !err.is_finite() {
                return Err(Error::StepFailure(format!("non-finite error estimate at t = {t}")));
            }
            if err <= 1.0 {
                t = if hit { target } else { t + step };
                y = next;
                k1 = k7;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            // a clipped landing step says nothing about the natural size
            if !(hit && err <= 1.0) {
                h = step * factor;
            }
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepFailure(format!("step size underflow at t = {t}")));
            }
        }
        out.push(y);
    }
    Ok(out)
}

/// Right-hand side of the angular ODE as a first-order system.
pub fn angular_rhs(a: f64) -> impl Fn(f64, &State) -> Result<State> {
    move |t, s| {
        let (y, v) = (s[0], s[1]);
        if !(y >= MIN_PROFILE_HEIGHT) {
            return Err(Error::StepFailure(format!(
                "profile height {y:e} at t = {t} is below {MIN_PROFILE_HEIGHT:e}"
            )));
        }
        Ok([v, ((a - 1.0) * (1.0 - y * y - v * v) - y * y) / y])
    }
}

/// A profile sampled by direct ODE integration.
#[derive(Debug, Clone, Serialize)]
pub struct SampledProfile {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
}

/// Integrates the angular ODE from `(t0, y0, v0)` in both directions and
/// samples it at `samples` equispaced points of `[lo, hi]`, which must
/// contain `t0`. `m` only labels the trajectory; it is fixed by the seed.
pub fn rk_shooting_oracle(
    a: f64,
    _m: f64,
    t0: f64,
    y0: f64,
    v0: f64,
    interval: (f64, f64),
    samples: usize,
) -> Result<SampledProfile> {
    let (lo, hi) = interval;
    if !(y0 > 0.0) {
        return domain(format!("the seed must be an interior point with y0 > 0, got {y0}"));
    }
    if !(lo <= t0 && t0 <= hi) || samples < 2 {
        return domain(format!("seed t0 = {t0} must lie in [{lo}, {hi}] with at least 2 samples"));
    }
    let grid: Vec<f64> = (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let split = grid.partition_point(|&t| t < t0);
    let backward: Vec<f64> = grid[..split].iter().rev().copied().collect();
    let forward = &grid[split..];
    let rhs = angular_rhs(a);
    let ctl = StepControl::default();
    let back = integrate_to(&rhs, t0, [y0, v0], &backward, ctl)?;
    let fwd = integrate_to(&rhs, t0, [y0, v0], forward, ctl)?;
    let states: Vec<State> = back.into_iter().rev().chain(fwd).collect();
    Ok(SampledProfile {
        y: states.iter().map(|s| s[0]).collect(),
        dy: states.iter().map(|s| s[1]).collect(),
        t: grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exponential_decay() {
        let out = integrate_to(
            |_, s: &State| Ok([-s[0], s[0]]),
            0.0,
            [1.0, 0.0],
            &[1.0, 2.0, 5.0],
            StepControl::default(),
        )
        .unwrap();
        for (s, t) in out.iter().zip([1.0f64, 2.0, 5.0]) {
            assert!((s[0] - (-t).exp()).abs() < 1e-11);
            assert!((s[1] - (1.0 - (-t).exp())).abs() < 1e-11);
        }
    }

    #[test]
    fn harmonic_oscillator_backwards() {
        let out = integrate_to(
            |_, s: &State| Ok([s[1], -s[0]]),
            0.0,
            [0.0, 1.0],
            &[-1.0, -3.0],
            StepControl::default(),
        )
        .unwrap();
        assert!((out[0][0] - (-1f64).sin()).abs() < 1e-10);
        assert!((out[1][0] - (-3f64).sin()).abs() < 1e-10);
    }

    #[test]
    fn sine_from_apex() {
        let p = rk_shooting_oracle(0.75, 0.0, PI / 2.0, 1.0, 0.0, (0.05, PI - 0.05), 301).unwrap();
        let worst = p
            .t
            .iter()
            .zip(&p.y)
            .map(|(t, y)| (y - t.sin()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn quadratic_closed_form_from_apex() {
        // a = 2, m = 1: y² = (1 - cos 2t)/2 + sin 2t
        let closed = |t: f64| (0.5 * (1.0 - (2.0 * t).cos()) + (2.0 * t).sin()).sqrt();
        let t_star = 0.5 * (PI / 2.0 + 0.5f64.atan());
        let y_star = ((1.0 + 5f64.sqrt()) / 2.0).sqrt();
        let p = rk_shooting_oracle(2.0, 1.0, t_star, y_star, 0.0, (0.05 * t_star, 1.95 * t_star), 201)
            .unwrap();
        for (t, y) in p.t.iter().zip(&p.y) {
            assert!((y - closed(*t)).abs() < 1e-7, "t={t}");
        }
    }

    #[test]
    fn stops_before_the_zero_set() {
        let r = rk_shooting_oracle(0.75, 0.0, PI / 2.0, 1.0, 0.0, (0.0, PI), 11);
        assert!(matches!(r, Err(Error::StepFailure(_))));
        assert!(rk_shooting_oracle(0.75, 0.0, 1.0, 0.0, 0.0, (0.5, 2.0), 11).is_err());
    }
}
