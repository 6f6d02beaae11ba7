//! Newton-Raphson AC power flow in polar form.

use super::NetworkError;
use crate::numerics::ComplexMatrix;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const TOLERANCE: f64 = 1e-8;
const MAX_ITERATIONS: usize = 20;

/// Scheduled data for one bus. Powers are net injections (generation minus
/// load) in pu on the system base.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BusSpec {
    /// Angle reference; holds voltage magnitude, absorbs the imbalance.
    Slack { v: f64 },
    /// Holds active power and voltage magnitude.
    Pv { p: f64, v: f64 },
    /// Holds active and reactive power.
    Pq { p: f64, q: f64 },
}

/// Converged power-flow operating point.
#[derive(Clone, Debug)]
pub struct PowerFlowResult {
    /// Complex bus voltages.
    pub v: Vec<Complex64>,
    /// Net complex power injection realized at each bus.
    pub s: Vec<Complex64>,
    pub iterations: usize,
    pub max_mismatch: f64,
}

/// Solves the power flow on an assembled admittance matrix.
pub fn solve_power_flow(y: &ComplexMatrix, spec: &[BusSpec]) -> Result<PowerFlowResult, NetworkError> {
    let n = y.n();
    assert_eq!(spec.len(), n, "one spec per bus");

    let mut theta = vec![0.0f64; n];
    let mut vm: Vec<f64> = spec
        .iter()
        .map(|s| match s {
            BusSpec::Slack { v } | BusSpec::Pv { v, .. } => *v,
            BusSpec::Pq { .. } => 1.0,
        })
        .collect();

    let angle_unknowns: Vec<usize> = (0..n)
        .filter(|&i| !matches!(spec[i], BusSpec::Slack { .. }))
        .collect();
    let mag_unknowns: Vec<usize> = (0..n)
        .filter(|&i| matches!(spec[i], BusSpec::Pq { .. }))
        .collect();
    let n_unknowns = angle_unknowns.len() + mag_unknowns.len();

    let g = |i: usize, j: usize| y.get(i, j).re;
    let b = |i: usize, j: usize| y.get(i, j).im;

    let mut iterations = 0;
    let mut max_mismatch;
    loop {
        // Injected powers at the current iterate.
        let mut p = vec![0.0f64; n];
        let mut q = vec![0.0f64; n];
        for i in 0..n {
            for j in 0..n {
                let th = theta[i] - theta[j];
                let (sin, cos) = th.sin_cos();
                p[i] += vm[i] * vm[j] * (g(i, j) * cos + b(i, j) * sin);
                q[i] += vm[i] * vm[j] * (g(i, j) * sin - b(i, j) * cos);
            }
        }

        let mut mismatch = DVector::zeros(n_unknowns);
        for (r, &i) in angle_unknowns.iter().enumerate() {
            let p_spec = match spec[i] {
                BusSpec::Pv { p, .. } => p,
                BusSpec::Pq { p, .. } => p,
                BusSpec::Slack { .. } => unreachable!(),
            };
            mismatch[r] = p_spec - p[i];
        }
        for (r, &i) in mag_unknowns.iter().enumerate() {
            let q_spec = match spec[i] {
                BusSpec::Pq { q, .. } => q,
                _ => unreachable!(),
            };
            mismatch[angle_unknowns.len() + r] = q_spec - q[i];
        }
        max_mismatch = mismatch.iter().fold(0.0f64, |m, x| m.max(x.abs()));

        if max_mismatch < TOLERANCE {
            break;
        }
        if iterations >= MAX_ITERATIONS {
            return Err(NetworkError::PowerFlowDiverged {
                iterations,
                mismatch: max_mismatch,
            });
        }

        // Polar Jacobian, rows ordered as the mismatch vector.
        let mut jac = DMatrix::zeros(n_unknowns, n_unknowns);
        let na = angle_unknowns.len();
        for (r, &i) in angle_unknowns.iter().enumerate() {
            for (c, &j) in angle_unknowns.iter().enumerate() {
                jac[(r, c)] = if i == j {
                    -q[i] - b(i, i) * vm[i] * vm[i]
                } else {
                    let th = theta[i] - theta[j];
                    vm[i] * vm[j] * (g(i, j) * th.sin() - b(i, j) * th.cos())
                };
            }
            for (c, &j) in mag_unknowns.iter().enumerate() {
                jac[(r, na + c)] = if i == j {
                    p[i] / vm[i] + g(i, i) * vm[i]
                } else {
                    let th = theta[i] - theta[j];
                    vm[i] * (g(i, j) * th.cos() + b(i, j) * th.sin())
                };
            }
        }
        for (r, &i) in mag_unknowns.iter().enumerate() {
            for (c, &j) in angle_unknowns.iter().enumerate() {
                jac[(na + r, c)] = if i == j {
                    p[i] - g(i, i) * vm[i] * vm[i]
                } else {
                    let th = theta[i] - theta[j];
                    -vm[i] * vm[j] * (g(i, j) * th.cos() + b(i, j) * th.sin())
                };
            }
            for (c, &j) in mag_unknowns.iter().enumerate() {
                jac[(na + r, na + c)] = if i == j {
                    q[i] / vm[i] - b(i, i) * vm[i]
                } else {
                    let th = theta[i] - theta[j];
                    vm[i] * (g(i, j) * th.sin() - b(i, j) * th.cos())
                };
            }
        }

        let step = jac.lu().solve(&mismatch).ok_or(NetworkError::PowerFlowDiverged {
            iterations,
            mismatch: max_mismatch,
        })?;
        if !step.iter().all(|x| x.is_finite()) {
            return Err(NetworkError::PowerFlowDiverged {
                iterations,
                mismatch: max_mismatch,
            });
        }
        for (r, &i) in angle_unknowns.iter().enumerate() {
            theta[i] += step[r];
        }
        for (r, &i) in mag_unknowns.iter().enumerate() {
            vm[i] += step[na + r];
            if vm[i] <= 0.0 {
                return Err(NetworkError::PowerFlowDiverged {
                    iterations,
                    mismatch: max_mismatch,
                });
            }
        }
        iterations += 1;
    }

    let v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(vm[i], theta[i]))
        .collect();
    let yv = y.mul_vec(&v);
    let s: Vec<Complex64> = v.iter().zip(&yv).map(|(vi, yi)| vi * yi.conj()).collect();
    Ok(PowerFlowResult {
        v,
        s,
        iterations,
        max_mismatch,
    })
}
