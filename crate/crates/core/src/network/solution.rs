//! Per-step algebraic network solution with voltage-dependent injections,
//! plus fault switching on the admittance matrix.

use super::NetworkError;
use crate::numerics::{ComplexMatrix, LuFactors};
use num_complex::Complex64;

/// Voltage below which the constant-current load component transitions to
/// constant admittance so the injection stays bounded through faults.
const LOW_VOLTAGE_LINEARIZE: f64 = 0.2;

/// Static load with constant-current active power and constant-impedance
/// reactive power, referenced to the voltage `v0` it was converted at.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZiLoad {
    /// Bus index (0-based).
    pub bus: usize,
    /// Active power drawn at `v0`, pu.
    pub p0: f64,
    /// Reactive power drawn at `v0`, pu.
    pub q0: f64,
    /// Reference voltage magnitude, pu.
    pub v0: f64,
}

/// Current drawn by the load at terminal voltage `v` (consumption sign: a
/// positive-power load returns current flowing out of the bus).
///
/// Active power scales with `|v|/v0` (constant current) and reactive power
/// with `(|v|/v0)^2` (constant impedance). Below 0.2 pu the active part
/// fades linearly with voltage so the current never diverges as `|v| -> 0`.
pub fn zi_load_current(load: &ZiLoad, v: Complex64) -> Complex64 {
    let vm = v.norm();
    if vm < 1e-12 {
        return Complex64::new(0.0, 0.0);
    }
    let ratio = vm / load.v0;
    let p_scale = if vm >= LOW_VOLTAGE_LINEARIZE {
        1.0
    } else {
        vm / LOW_VOLTAGE_LINEARIZE
    };
    let s_eff = Complex64::new(load.p0 * ratio * p_scale, load.q0 * ratio * ratio);
    (s_eff / v).conj()
}

/// Adds a fault shunt admittance at `bus`, returning the faulted matrix and
/// leaving the input untouched (removal is simply the original matrix).
pub fn apply_fault(y: &ComplexMatrix, bus: usize, y_fault: Complex64) -> ComplexMatrix {
    let mut faulted = y.clone();
    faulted.add_at(bus, bus, y_fault);
    faulted
}

/// Solves `Y v = i(v)` by fixed-point iteration on the injection currents.
///
/// `inject` returns the full per-bus current injection (devices minus
/// loads) evaluated at a voltage iterate. Constant device admittances are
/// expected to be folded into `y` already, so the iteration only carries the
/// genuinely voltage-dependent parts and converges in a few passes.
pub fn network_solution_lu<F>(
    lu: &LuFactors,
    mut inject: F,
    v_guess: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<Complex64>, usize), NetworkError>
where
    F: FnMut(&[Complex64]) -> Vec<Complex64>,
{
    let mut v = v_guess.to_vec();
    let mut delta = f64::INFINITY;
    for iter in 0..max_iter {
        let i = inject(&v);
        let v_next = lu.solve(&i)?;
        delta = v
            .iter()
            .zip(&v_next)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        v = v_next;
        if delta < tol {
            return Ok((v, iter + 1));
        }
    }
    Err(NetworkError::NetworkSolutionDiverged {
        iterations: max_iter,
        delta,
    })
}

/// Convenience wrapper over [`network_solution_lu`] that factorizes `y`
/// first. Step loops should factorize once per topology and reuse it.
pub fn network_solution<F>(
    y: &ComplexMatrix,
    inject: F,
    v_guess: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<Complex64>, usize), NetworkError>
where
    F: FnMut(&[Complex64]) -> Vec<Complex64>,
{
    let lu = y.lu()?;
    network_solution_lu(&lu, inject, v_guess, tol, max_iter)
}
