//! Damped-sinusoid mode descriptions and derived quantities.

use super::prony::ModalError;

/// One damped sinusoid `A * exp(sigma*t) * cos(omega*t + phase)`.
///
/// Oscillatory modes are reported once per conjugate pair with `omega > 0`
/// and the pair's combined real amplitude; non-oscillatory terms have
/// `omega == 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mode {
    /// Continuous-time decay rate, 1/s (negative means damped).
    pub sigma: f64,
    /// Angular frequency, rad/s (non-negative).
    pub omega: f64,
    /// Real signal amplitude.
    pub amplitude: f64,
    /// Phase at the window start, rad.
    pub phase: f64,
}

impl Mode {
    /// Frequency in Hz.
    pub fn frequency_hz(&self) -> f64 {
        self.omega / std::f64::consts::TAU
    }

    /// Energy metric used to order modes: the squared amplitude weighted by
    /// how long the mode persists. For a decaying mode this integrates the
    /// squared envelope (`amp^2 / |2*sigma|`); non-decaying modes keep their
    /// squared amplitude.
    pub fn energy(&self) -> f64 {
        if self.sigma < 0.0 {
            self.amplitude * self.amplitude / (2.0 * self.sigma.abs())
        } else {
            self.amplitude * self.amplitude
        }
    }

    /// Damping ratio of this mode.
    pub fn damping_ratio(&self) -> Result<f64, ModalError> {
        damping_ratio(self.sigma, self.omega)
    }
}

/// Damping ratio `-sigma / sqrt(sigma^2 + omega^2)`.
pub fn damping_ratio(sigma: f64, omega: f64) -> Result<f64, ModalError> {
    let norm = sigma.hypot(omega);
    if norm == 0.0 {
        return Err(ModalError::UndefinedRatio);
    }
    Ok(-sigma / norm)
}

/// Picks the highest-energy mode whose frequency lies within
/// `[f_lo_hz, f_hi_hz]`.
pub fn dominant_mode(modes: &[Mode], f_lo_hz: f64, f_hi_hz: f64) -> Result<Mode, ModalError> {
    modes
        .iter()
        .filter(|m| {
            let f = m.frequency_hz();
            f >= f_lo_hz && f <= f_hi_hz
        })
        .max_by(|a, b| a.energy().total_cmp(&b.energy()))
        .copied()
        .ok_or(ModalError::NoModeInBand { f_lo_hz, f_hi_hz })
}
