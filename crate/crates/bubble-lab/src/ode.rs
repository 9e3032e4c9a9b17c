//! Adaptive Runge–Kutta–Fehlberg integration for small ODE systems.
//!
//! The embedded 4(5) pair provides a per-step error estimate; steps are
//! accepted against a mixed absolute/relative tolerance and the step size
//! follows the usual fifth-root controller.  This integrator serves as the
//! independent reference for spatially homogeneous solutions (the damped
//! twin-well oscillator) and for cross-checking moment evolutions produced
//! by the PDE solver.

use crate::error::{Error, Result};

/// Fehlberg tableau, nodes.
const C: [f64; 6] = [0.0, 0.25, 3.0 / 8.0, 12.0 / 13.0, 1.0, 0.5];
/// Fehlberg tableau, stage couplings (row `i` feeds stage `i+1`).
const A: [[f64; 5]; 5] = [
    [0.25, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 32.0, 9.0 / 32.0, 0.0, 0.0, 0.0],
    [1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0, 0.0, 0.0],
    [439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0, 0.0],
    [-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0],
];
/// Fifth-order solution weights (used to propagate).
const B5: [f64; 6] = [16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0, -9.0 / 50.0, 2.0 / 55.0];
/// Fourth-order solution weights (used for the error estimate).
const B4: [f64; 6] = [25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -1.0 / 5.0, 0.0];

/// Maximum number of accepted + rejected steps before giving up.
pub const MAX_STEPS: usize = 2_000_000;

/// Dense record of an adaptive integration: every accepted step is stored.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    /// Accepted step times, starting at `t0` and ending exactly at `t_end`.
    pub times: Vec<f64>,
    /// State vector at each accepted time.
    pub states: Vec<Vec<f64>>,
}

impl OdeSolution {
    /// Final state.
    pub fn last(&self) -> &[f64] {
        self.states.last().expect("solution always holds the initial state")
    }

    /// Piecewise-linear sample at time `t` (clamped to the covered range).
    /// Adequate for plotting and for coarse trajectory export; use the
    /// stored knots directly when step-level accuracy matters.
    pub fn sample(&self, t: f64) -> Vec<f64> {
        let times = &self.times;
        if t <= times[0] {
            return self.states[0].clone();
        }
        if t >= *times.last().unwrap() {
            return self.last().to_vec();
        }
        let idx = times.partition_point(|&u| u <= t).min(times.len() - 1);
        let (t0, t1) = (times[idx - 1], times[idx]);
        let w = (t - t0) / (t1 - t0);
        self.states[idx - 1]
            .iter()
            .zip(&self.states[idx])
            .map(|(a, b)| a + w * (b - a))
            .collect()
    }
}

/// How a predicate-guarded integration ([`rkf45_until`]) ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopOutcome {
    /// The stop predicate first held at this accepted-step time.
    Triggered {
        /// Accepted-step time at which the predicate first held.
        time: f64,
    },
    /// The horizon was reached with the predicate never holding.
    HorizonReached,
}

/// Integrate `y' = deriv(t, y)` from `t0` to `t_end > t0` with the
/// Runge–Kutta–Fehlberg 4(5) pair.
///
/// A step is accepted when the embedded error estimate satisfies
/// `|err_i| ≤ abs_tol + rel_tol · |y_i|` component-wise; the last step is
/// clamped so the integration ends exactly at `t_end`.
///
/// # Errors
/// [`Error::Domain`] for a non-increasing time span or if the state blows
/// up (non-finite), [`Error::Mismatch`] if [`MAX_STEPS`] is exhausted.
pub fn rkf45<F>(deriv: F, t0: f64, y0: &[f64], t_end: f64, rel_tol: f64, abs_tol: f64) -> Result<OdeSolution>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    rkf45_core(deriv, t0, y0, t_end, rel_tol, abs_tol, |_, _| false).map(|(sol, _)| sol)
}

/// [`rkf45`] with a stop predicate checked after every accepted step:
/// integration halts early the first time `stop(t, y)` holds.  Intended
/// for divergence detection (e.g. "state exceeded 1e12"), where halting
/// at a large-but-finite threshold yields a clean crossing time instead
/// of an error deep in the overflow regime.
///
/// # Errors
/// As [`rkf45`].
pub fn rkf45_until<F, P>(
    deriv: F,
    t0: f64,
    y0: &[f64],
    t_horizon: f64,
    rel_tol: f64,
    abs_tol: f64,
    stop: P,
) -> Result<(OdeSolution, StopOutcome)>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
    P: Fn(f64, &[f64]) -> bool,
{
    rkf45_core(deriv, t0, y0, t_horizon, rel_tol, abs_tol, stop)
}

fn rkf45_core<F, P>(
    deriv: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    rel_tol: f64,
    abs_tol: f64,
    stop: P,
) -> Result<(OdeSolution, StopOutcome)>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
    P: Fn(f64, &[f64]) -> bool,
{
    if !(t_end > t0) {
        return Err(Error::domain("rkf45", format!("need t_end > t0, got [{t0}, {t_end}]")));
    }
    let dim = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = ((t_end - t0) / 100.0).min(0.1).max(1e-8);
    let mut sol = OdeSolution { times: vec![t0], states: vec![y.clone()] };

    let mut k = vec![vec![0.0; dim]; 6];
    let mut stage = vec![0.0; dim];

    for _ in 0..MAX_STEPS {
        if t >= t_end {
            return Ok((sol, StopOutcome::HorizonReached));
        }
        h = h.min(t_end - t);

        // Six stages.
        k[0] = deriv(t, &y);
        for s in 1..6 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s - 1][j] * kj[i];
                }
                stage[i] = y[i] + h * acc;
            }
            k[s] = deriv(t + C[s] * h, &stage);
        }

        // Error estimate from the difference of the embedded orders.
        let mut ratio_max: f64 = 0.0;
        for i in 0..dim {
            let mut e = 0.0;
            for s in 0..6 {
                e += (B5[s] - B4[s]) * k[s][i];
            }
            e *= h;
            let scale = abs_tol + rel_tol * y[i].abs();
            ratio_max = ratio_max.max((e / scale).abs());
        }

        if ratio_max <= 1.0 {
            // Accept, propagating the fifth-order solution.
            for i in 0..dim {
                let mut acc = 0.0;
                for s in 0..6 {
                    acc += B5[s] * k[s][i];
                }
                y[i] += h * acc;
                if !y[i].is_finite() {
                    return Err(Error::domain("rkf45", format!("state diverged at t = {t:.6}")));
                }
            }
            t += h;
            sol.times.push(t);
            sol.states.push(y.clone());
            if stop(t, &y) {
                return Ok((sol, StopOutcome::Triggered { time: t }));
            }
        }

        // Fifth-root controller with the customary safety factor and clamps.
        let factor = if ratio_max > 0.0 {
            (0.9 * ratio_max.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h < 1e-14 * (t_end - t0) {
            return Err(Error::mismatch(
                "rkf45",
                format!("step size collapsed to {h:.3e} at t = {t:.6}"),
            ));
        }
    }
    Err(Error::mismatch("rkf45", format!("exceeded {MAX_STEPS} steps")))
}

// ─────────────────────────── tests ───────────────────────────
