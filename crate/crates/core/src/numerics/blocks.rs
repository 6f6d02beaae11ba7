//! First-order control blocks shared by machine and converter controls.
//!
//! Every block comes in a pure derivative/output form so it can live inside a
//! system-wide integrator. Blocks that are useful standalone also get a
//! `*_step` form that advances their own state over one sample with the same
//! predictor-corrector rule the system integrator uses.

use thiserror::Error;

/// One scalar integrator state together with its most recent derivative.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BlockState {
    /// Current value of the integrated state.
    pub value: f64,
    /// Derivative from the most recent evaluation, in value units per second.
    pub derivative: f64,
}

impl BlockState {
    pub fn new(value: f64) -> Self {
        Self {
            value,
            derivative: 0.0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BlockError {
    /// A lag, washout, or lead-lag was configured with a non-positive or
    /// non-finite time constant.
    #[error("invalid time constant {0} s; must be finite and > 0")]
    InvalidTimeConstant(f64),
}

fn check_time_constant(t: f64) -> Result<(), BlockError> {
    if !t.is_finite() || t <= 0.0 {
        return Err(BlockError::InvalidTimeConstant(t));
    }
    Ok(())
}

/// Derivative of a first-order lag `1/(1 + sT)`: `ds/dt = (input - state)/T`.
pub fn first_order_lag_deriv(input: f64, state: f64, t: f64) -> Result<f64, BlockError> {
    check_time_constant(t)?;
    Ok((input - state) / t)
}

/// Output of a washout `Kw*sTw/(1 + sTw)` whose state tracks the input:
/// `out = Kw*(input - state)`.
pub fn washout_output(input: f64, state: f64, kw: f64) -> f64 {
    kw * (input - state)
}

/// Advances a washout block one step of length `dt` with the input held
/// constant, returning the end-of-step output. The state obeys
/// `ds/dt = (input - state)/Tw`.
pub fn washout_step(
    input: f64,
    state: &mut BlockState,
    kw: f64,
    tw: f64,
    dt: f64,
) -> Result<f64, BlockError> {
    check_time_constant(tw)?;
    let d0 = (input - state.value) / tw;
    let predicted = state.value + dt * d0;
    let d1 = (input - predicted) / tw;
    state.value += 0.5 * dt * (d0 + d1);
    state.derivative = (input - state.value) / tw;
    Ok(washout_output(input, state.value, kw))
}

/// Derivative of a lead-lag `(1 + sT_lead)/(1 + sT_lag)` in canonical form:
/// the state is the lag output, `ds/dt = (input - state)/T_lag`.
pub fn lead_lag_deriv(input: f64, state: f64, t_lag: f64) -> Result<f64, BlockError> {
    check_time_constant(t_lag)?;
    Ok((input - state) / t_lag)
}

/// Output of the canonical lead-lag:
/// `out = state + (T_lead/T_lag)*(input - state)`.
pub fn lead_lag_output(input: f64, state: f64, t_lead: f64, t_lag: f64) -> f64 {
    state + (t_lead / t_lag) * (input - state)
}

/// Continuous (shifted) deadband: zero inside `[-width, width]`, then the
/// input shifted toward zero by `width` so the output has no jump at the
/// band edge. Odd-symmetric in the input.
pub fn deadband(x: f64, width: f64) -> f64 {
    let w = width.max(0.0);
    if x > w {
        x - w
    } else if x < -w {
        x + w
    } else {
        0.0
    }
}

/// Anti-windup guard for a limited integrator: returns the derivative,
/// zeroed when the state sits at (or beyond) a bound and the derivative
/// pushes further outward. The caller clamps the state itself.
pub fn anti_windup_deriv(value: f64, deriv: f64, min: f64, max: f64) -> f64 {
    if (value >= max && deriv > 0.0) || (value <= min && deriv < 0.0) {
        0.0
    } else {
        deriv
    }
}

/// Output of a PI regulator with output limits: `clamp(kp*error + integ)`.
/// The integrator state is expected to carry the `ki`-scaled integral.
pub fn pi_output(error: f64, integ: f64, kp: f64, min: f64, max: f64) -> f64 {
    (kp * error + integ).clamp(min, max)
}
