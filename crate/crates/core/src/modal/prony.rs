//! Prony decomposition of a uniformly sampled signal into damped sinusoids.
//!
//! The method fits a linear-prediction model of the requested order by least
//! squares, takes the roots of the associated characteristic polynomial as
//! discrete-time mode poles, maps them to continuous time, and then fits
//! amplitudes and phases by a second least-squares pass. Rank-deficient
//! prediction systems (signal has fewer modes than the order allows) are
//! solved in the minimum-norm sense; the surplus roots receive negligible
//! amplitude and sort to the back.

use super::mode::Mode;
use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

/// Decay-rate magnitude beyond which a discrete root is treated as a
/// numerical artifact rather than a physical mode.
const SIGMA_LIMIT: f64 = 100.0;

/// Relative singular-value floor below which a direction is treated as a
/// structural rank deficiency instead of ill conditioning.
const RANK_FLOOR: f64 = 1e-14;

/// Condition-number threshold for rejecting the prediction system.
const COND_LIMIT: f64 = 1e12;

#[derive(Debug, Error, PartialEq)]
pub enum ModalError {
    /// The linear-prediction system is ill conditioned, which usually means
    /// the order is too high for the window or the window is too short.
    #[error("prediction matrix condition number {cond:.3e} exceeds 1e12")]
    IllConditioned { cond: f64 },
    /// Every characteristic root fell outside the representable decay-rate
    /// range, leaving no usable mode.
    #[error("all characteristic roots outside |sigma| <= {SIGMA_LIMIT} 1/s")]
    RootOutOfRange,
    /// Order must be even, at least 2, and no more than a third of the
    /// signal length.
    #[error("order {order} invalid for signal of {len} samples")]
    InvalidOrder { order: usize, len: usize },
    /// The sample interval must be finite and positive.
    #[error("invalid sample interval {0} s")]
    InvalidSampleInterval(f64),
    /// Damping ratio is undefined when sigma and omega are both zero.
    #[error("damping ratio undefined for a zero mode")]
    UndefinedRatio,
    /// No mode lies inside the requested frequency band.
    #[error("no mode in [{f_lo_hz}, {f_hi_hz}] Hz")]
    NoModeInBand { f_lo_hz: f64, f_hi_hz: f64 },
}

/// Removes the least-squares straight line from `signal`.
pub fn detrend_linear(signal: &[f64]) -> Vec<f64> {
    let n = signal.len();
    if n < 2 {
        return vec![0.0; n];
    }
    // Fit y = a + b*i with i centered to keep the normal equations diagonal.
    let mean_i = (n as f64 - 1.0) / 2.0;
    let mean_y = signal.iter().sum::<f64>() / n as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, &y) in signal.iter().enumerate() {
        let di = i as f64 - mean_i;
        num += di * (y - mean_y);
        den += di * di;
    }
    let b = if den > 0.0 { num / den } else { 0.0 };
    signal
        .iter()
        .enumerate()
        .map(|(i, &y)| y - (mean_y + b * (i as f64 - mean_i)))
        .collect()
}

/// Minimum-norm least-squares solve via one-sided Jacobi orthogonalization,
/// with a structural rank floor. Returns the solution and the condition
/// number of the retained directions.
///
/// One-sided Jacobi rotates column pairs of a working copy until all columns
/// are mutually orthogonal; the column norms are then the singular values
/// and the accumulated rotations form the right singular basis. It stays
/// accurate on exactly rank-deficient systems, which arise here whenever the
/// signal carries fewer modes than the prediction order allows.
fn svd_least_squares(a: DMatrix<f64>, b: DVector<f64>) -> (DVector<f64>, f64) {
    let (n, p) = a.shape();
    let mut w = a;
    let mut v = DMatrix::<f64>::identity(p, p);
    for _sweep in 0..40 {
        let mut rotated = false;
        for i in 0..p {
            for j in (i + 1)..p {
                let mut gii = 0.0;
                let mut gjj = 0.0;
                let mut gij = 0.0;
                for r in 0..n {
                    let (wi, wj) = (w[(r, i)], w[(r, j)]);
                    gii += wi * wi;
                    gjj += wj * wj;
                    gij += wi * wj;
                }
                if gij.abs() <= 1e-15 * (gii * gjj).sqrt() || gii == 0.0 || gjj == 0.0 {
                    continue;
                }
                let tau = (gjj - gii) / (2.0 * gij);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for r in 0..n {
                    let (wi, wj) = (w[(r, i)], w[(r, j)]);
                    w[(r, i)] = c * wi - s * wj;
                    w[(r, j)] = s * wi + c * wj;
                }
                for r in 0..p {
                    let (vi, vj) = (v[(r, i)], v[(r, j)]);
                    v[(r, i)] = c * vi - s * vj;
                    v[(r, j)] = s * vi + c * vj;
                }
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..p).map(|i| w.column(i).norm()).collect();
    let s_max = norms.iter().copied().fold(0.0f64, f64::max);
    let floor = s_max * RANK_FLOOR;
    let mut s_min_kept = f64::INFINITY;
    let mut x = DVector::zeros(p);
    for i in 0..p {
        if norms[i] > floor {
            // x += v_i * (w_i . b) / s_i^2, since u_i = w_i / s_i.
            let proj = w.column(i).dot(&b) / (norms[i] * norms[i]);
            x.axpy(proj, &v.column(i), 1.0);
            s_min_kept = s_min_kept.min(norms[i]);
        }
    }
    let cond = if s_min_kept.is_finite() && s_min_kept > 0.0 {
        s_max / s_min_kept
    } else {
        1.0
    };
    (x, cond)
}

/// Newton refinement of companion-matrix eigenvalues against the
/// characteristic polynomial `z^p - a1*z^(p-1) - ... - ap`. Clustered roots
/// with a vanishing polynomial derivative are left as the eigensolver
/// produced them.
fn polish_roots(roots: &mut nalgebra::DVector<Complex<f64>>, coeffs: &DVector<f64>) {
    let p = coeffs.len();
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let mut val = Complex::new(1.0, 0.0);
            let mut der = Complex::new(0.0, 0.0);
            // Horner evaluation of the monic polynomial and its derivative.
            for j in 0..p {
                der = der * *z + val;
                val = val * *z - Complex::new(coeffs[j], 0.0);
            }
            if der.norm() < 1e-12 {
                break;
            }
            let step = val / der;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *z -= step;
            if step.norm() < 1e-15 * z.norm().max(1.0) {
                break;
            }
        }
    }
}

/// Decomposes `signal` (sampled every `dt` seconds) into damped sinusoids.
///
/// `order` bounds the number of discrete poles; oscillatory modes consume
/// two poles each. The returned modes are sorted by decreasing energy.
pub fn prony_decompose(signal: &[f64], dt: f64, order: usize) -> Result<Vec<Mode>, ModalError> {
    let n = signal.len();
    if !dt.is_finite() || dt <= 0.0 {
        return Err(ModalError::InvalidSampleInterval(dt));
    }
    if order < 2 || order % 2 != 0 || order * 3 > n {
        return Err(ModalError::InvalidOrder { order, len: n });
    }

    // Linear prediction: x[k] ~ sum_j a_j * x[k-j] for k = order..n.
    let rows = n - order;
    let a = DMatrix::from_fn(rows, order, |r, j| signal[order + r - 1 - j]);
    let b = DVector::from_fn(rows, |r, _| signal[order + r]);
    let (coeffs, cond) = svd_least_squares(a, b);
    if cond > COND_LIMIT {
        return Err(ModalError::IllConditioned { cond });
    }

    // Companion matrix of z^p - a1*z^(p-1) - ... - ap.
    let companion = DMatrix::from_fn(order, order, |r, c| {
        if r == 0 {
            coeffs[c]
        } else if r == c + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots = companion.complex_eigenvalues();
    polish_roots(&mut roots, &coeffs);

    // Map to continuous time and drop artifact roots. The extra exponent
    // guard keeps the envelope columns representable over the window.
    let t_max = (n - 1) as f64 * dt;
    let mut poles: Vec<(f64, f64)> = Vec::new();
    for z in roots.iter() {
        let mag = z.norm();
        if mag <= 0.0 {
            continue;
        }
        let sigma = mag.ln() / dt;
        let omega = z.arg() / dt;
        if !sigma.is_finite() || sigma.abs() > SIGMA_LIMIT || sigma * t_max > 200.0 {
            continue;
        }
        poles.push((sigma, omega));
    }
    if poles.is_empty() {
        return Err(ModalError::RootOutOfRange);
    }

    // One representative per conjugate pair: omega >= 0. A tolerance ties
    // numerically split conjugates back together.
    let omega_eps = 1e-9 / dt;
    let mut reps: Vec<(f64, f64)> = Vec::new();
    for &(sigma, omega) in &poles {
        if omega < -omega_eps {
            continue;
        }
        let omega = if omega.abs() <= omega_eps { 0.0 } else { omega };
        if reps
            .iter()
            .any(|&(s, w)| (s - sigma).abs() < 1e-9 && (w - omega).abs() < omega_eps)
        {
            continue;
        }
        reps.push((sigma, omega));
    }
    if reps.is_empty() {
        return Err(ModalError::RootOutOfRange);
    }
    reps.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)));

    // Real-valued amplitude/phase fit over the representatives.
    let mut col_of_rep: Vec<(usize, bool)> = Vec::new();
    let mut ncols = 0usize;
    for &(_, omega) in &reps {
        let oscillatory = omega > 0.0;
        col_of_rep.push((ncols, oscillatory));
        ncols += if oscillatory { 2 } else { 1 };
    }
    let design = DMatrix::from_fn(n, ncols, |r, c| {
        let t = r as f64 * dt;
        for (k, &(start, osc)) in col_of_rep.iter().enumerate() {
            let (sigma, omega) = reps[k];
            if c == start {
                return if osc {
                    (sigma * t).exp() * (omega * t).cos()
                } else {
                    (sigma * t).exp()
                };
            }
            if osc && c == start + 1 {
                return (sigma * t).exp() * (omega * t).sin();
            }
        }
        unreachable!("column index maps to a representative")
    });
    let target = DVector::from_column_slice(signal);
    let (fit, _) = svd_least_squares(design, target);

    let mut modes: Vec<Mode> = Vec::with_capacity(reps.len());
    for (k, &(start, osc)) in col_of_rep.iter().enumerate() {
        let (sigma, omega) = reps[k];
        let (amplitude, phase) = if osc {
            let (c, s) = (fit[start], fit[start + 1]);
            (c.hypot(s), (-s).atan2(c))
        } else if fit[start] >= 0.0 {
            (fit[start], 0.0)
        } else {
            (-fit[start], std::f64::consts::PI)
        };
        modes.push(Mode {
            sigma,
            omega,
            amplitude,
            phase,
        });
    }
    modes.sort_by(|a, b| {
        b.energy()
            .total_cmp(&a.energy())
            .then(a.omega.total_cmp(&b.omega))
            .then(a.sigma.total_cmp(&b.sigma))
    });
    Ok(modes)
}

/// Evaluates the sum of `modes` at `n` samples spaced `dt` apart.
pub fn reconstruct(modes: &[Mode], n: usize, dt: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let t = k as f64 * dt;
            modes
                .iter()
                .map(|m| m.amplitude * (m.sigma * t).exp() * (m.omega * t + m.phase).cos())
                .sum()
        })
        .collect()
}
