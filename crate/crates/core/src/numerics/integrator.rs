//! Fixed-step Heun (predictor-corrector) integration over a collection of
//! per-device state vectors.
//!
//! The integrator owns no model knowledge: a caller-supplied evaluator fills
//! each device's derivative buffer from the current values (solving whatever
//! algebraic constraints it needs along the way), and a clamp hook enforces
//! hard state limits after every stage update.

use thiserror::Error;

/// Flat per-device vector of continuous states plus a derivative buffer of
/// the same length. Devices address entries by fixed indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DeviceState {
    /// State values.
    pub x: Vec<f64>,
    /// Derivatives from the most recent evaluation, per second.
    pub dx: Vec<f64>,
}

impl DeviceState {
    pub fn new(n: usize) -> Self {
        Self {
            x: vec![0.0; n],
            dx: vec![0.0; n],
        }
    }

    pub fn from_values(x: Vec<f64>) -> Self {
        let dx = vec![0.0; x.len()];
        Self { x, dx }
    }
}

#[derive(Debug, Error)]
pub enum IntegratorError<E> {
    /// A derivative evaluation produced NaN or infinity.
    #[error("non-finite derivative in device {device} state {index}")]
    NonFiniteDerivative { device: usize, index: usize },
    /// The step length was not finite and positive.
    #[error("invalid time step {0} s")]
    InvalidTimeStep(f64),
    /// The derivative evaluator itself failed (for example, the algebraic
    /// network solve did not converge).
    #[error(transparent)]
    Evaluator(E),
}

fn check_finite<E>(states: &[DeviceState]) -> Result<(), IntegratorError<E>> {
    for (device, s) in states.iter().enumerate() {
        for (index, d) in s.dx.iter().enumerate() {
            if !d.is_finite() {
                return Err(IntegratorError::NonFiniteDerivative { device, index });
            }
        }
    }
    Ok(())
}

/// Advances all devices one step of length `dt` with Heun's method:
/// predict with the slope at the start, then average with the slope at the
/// predicted point. `clamp_fn` runs after each stage so limited states never
/// leave their bounds, matching the anti-windup convention of the blocks.
pub fn heun_step<E, D, C>(
    states: &mut [DeviceState],
    mut deriv_fn: D,
    mut clamp_fn: C,
    dt: f64,
) -> Result<(), IntegratorError<E>>
where
    D: FnMut(&mut [DeviceState]) -> Result<(), E>,
    C: FnMut(&mut [DeviceState]),
{
    if !dt.is_finite() || dt <= 0.0 {
        return Err(IntegratorError::InvalidTimeStep(dt));
    }

    deriv_fn(states).map_err(IntegratorError::Evaluator)?;
    check_finite(states)?;

    let x0: Vec<Vec<f64>> = states.iter().map(|s| s.x.clone()).collect();
    let dx0: Vec<Vec<f64>> = states.iter().map(|s| s.dx.clone()).collect();

    for (s, (x, d)) in states.iter_mut().zip(x0.iter().zip(dx0.iter())) {
        for i in 0..s.x.len() {
            s.x[i] = x[i] + dt * d[i];
        }
    }
    clamp_fn(states);

    deriv_fn(states).map_err(IntegratorError::Evaluator)?;
    check_finite(states)?;

    for (s, (x, d)) in states.iter_mut().zip(x0.iter().zip(dx0.iter())) {
        for i in 0..s.x.len() {
            s.x[i] = x[i] + 0.5 * dt * (d[i] + s.dx[i]);
        }
    }
    clamp_fn(states);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::convert::Infallible;

    fn no_clamp(_: &mut [DeviceState]) {}

    fn decay(states: &mut [DeviceState]) -> Result<(), Infallible> {
        for s in states.iter_mut() {
            for i in 0..s.x.len() {
                s.dx[i] = -s.x[i];
            }
        }
        Ok(())
    }

    #[test]
    fn zero_derivative_is_a_fixed_point() {
        let mut states = vec![DeviceState::from_values(vec![1.5, -0.25])];
        heun_step(
            &mut states,
            |s: &mut [DeviceState]| -> Result<(), Infallible> {
                for d in s.iter_mut() {
                    d.dx.fill(0.0);
                }
                Ok(())
            },
            no_clamp,
            0.1,
        )
        .unwrap();
        assert_eq!(states[0].x, vec![1.5, -0.25]);
    }

    #[test]
    fn single_decay_step_matches_hand_value() {
        // x' = -x, x0 = 1, dt = 0.1: predictor 0.9, corrector
        // 1 + 0.05*(-1 - 0.9) = 0.905.
        let mut states = vec![DeviceState::from_values(vec![1.0])];
        heun_step(&mut states, decay, no_clamp, 0.1).unwrap();
        assert_abs_diff_eq!(states[0].x[0], 0.905, epsilon = 1e-15);
    }

    #[test]
    fn halving_dt_reduces_error_second_order() {
        let run = |dt: f64| {
            let mut states = vec![DeviceState::from_values(vec![1.0])];
            let steps = (1.0 / dt).round() as usize;
            for _ in 0..steps {
                heun_step(&mut states, decay, no_clamp, dt).unwrap();
            }
            (states[0].x[0] - (-1.0f64).exp()).abs()
        };
        let ratio = run(0.1) / run(0.05);
        assert!(
            (3.5..=4.5).contains(&ratio),
            "convergence ratio {ratio} outside second-order band"
        );
    }

    #[test]
    fn non_finite_derivative_is_reported() {
        let mut states = vec![DeviceState::from_values(vec![1.0])];
        let err = heun_step(
            &mut states,
            |s: &mut [DeviceState]| -> Result<(), Infallible> {
                s[0].dx[0] = f64::NAN;
                Ok(())
            },
            no_clamp,
            0.1,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            IntegratorError::NonFiniteDerivative {
                device: 0,
                index: 0
            }
        ));
    }

    #[test]
    fn invalid_time_step_is_rejected() {
        let mut states = vec![DeviceState::from_values(vec![1.0])];
        for dt in [0.0, -0.1, f64::NAN] {
            assert!(matches!(
                heun_step(&mut states, decay, no_clamp, dt),
                Err(IntegratorError::InvalidTimeStep(_))
            ));
        }
    }

    #[test]
    fn clamp_hook_runs_after_each_stage() {
        // Strong positive drive with a clamp at 1.0: the state must end the
        // step exactly on the bound, not beyond it.
        let mut states = vec![DeviceState::from_values(vec![0.9])];
        heun_step(
            &mut states,
            |s: &mut [DeviceState]| -> Result<(), Infallible> {
                s[0].dx[0] = 50.0;
                Ok(())
            },
            |s: &mut [DeviceState]| {
                s[0].x[0] = s[0].x[0].min(1.0);
            },
            0.1,
        )
        .unwrap();
        assert_eq!(states[0].x[0], 1.0);
    }
}
