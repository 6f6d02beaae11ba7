//! Bus admittance matrix assembly.

use super::NetworkError;
use crate::numerics::ComplexMatrix;
use num_complex::Complex64;

/// One series branch (line or transformer) of the positive-sequence network.
///
/// All quantities are per unit on the system base. `scale` multiplies the
/// series impedance only, so a value of 2 behaves like a line of twice the
/// length without touching the charging; it is the knob used to stress the
/// corridor between areas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Branch {
    /// Sending bus index (0-based).
    pub from: usize,
    /// Receiving bus index (0-based).
    pub to: usize,
    /// Series resistance, pu.
    pub r: f64,
    /// Series reactance, pu.
    pub x: f64,
    /// Total line-charging susceptance, pu (split half per end).
    pub b_charging: f64,
    /// Multiplier applied to the series impedance.
    pub scale: f64,
}

impl Branch {
    pub fn new(from: usize, to: usize, r: f64, x: f64, b_charging: f64) -> Self {
        Self {
            from,
            to,
            r,
            x,
            b_charging,
            scale: 1.0,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    /// Series admittance including the length multiplier.
    pub fn series_admittance(&self) -> Result<Complex64, NetworkError> {
        let z = Complex64::new(self.r, self.x) * self.scale;
        if z.norm() == 0.0 {
            return Err(NetworkError::ZeroImpedanceBranch {
                from: self.from,
                to: self.to,
            });
        }
        Ok(z.inv())
    }
}

/// Assembles the n-bus admittance matrix from branch data.
///
/// Fails if any branch endpoint is out of range or if the branch graph does
/// not connect every bus.
pub fn build_admittance(n_bus: usize, branches: &[Branch]) -> Result<ComplexMatrix, NetworkError> {
    assert!(n_bus > 0, "network needs at least one bus");
    let mut y = ComplexMatrix::zeros(n_bus);
    let mut adjacency = vec![Vec::new(); n_bus];
    for br in branches {
        if br.from >= n_bus {
            return Err(NetworkError::BusOutOfRange(br.from));
        }
        if br.to >= n_bus {
            return Err(NetworkError::BusOutOfRange(br.to));
        }
        let ys = br.series_admittance()?;
        let yc = Complex64::new(0.0, br.b_charging / 2.0);
        y.add_at(br.from, br.from, ys + yc);
        y.add_at(br.to, br.to, ys + yc);
        y.add_at(br.from, br.to, -ys);
        y.add_at(br.to, br.from, -ys);
        adjacency[br.from].push(br.to);
        adjacency[br.to].push(br.from);
    }

    // Every bus must be reachable from bus 0.
    let mut seen = vec![false; n_bus];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for &j in &adjacency[i] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    if let Some(unreached) = seen.iter().position(|s| !s) {
        return Err(NetworkError::DisconnectedNetwork(unreached));
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_reactive_branch_matches_hand_matrix() {
        let y = build_admittance(2, &[Branch::new(0, 1, 0.0, 0.1, 0.0)]).unwrap();
        assert!((y.get(0, 0) - c(0.0, -10.0)).norm() < 1e-12);
        assert!((y.get(1, 1) - c(0.0, -10.0)).norm() < 1e-12);
        assert!((y.get(0, 1) - c(0.0, 10.0)).norm() < 1e-12);
        assert!((y.get(1, 0) - c(0.0, 10.0)).norm() < 1e-12);
    }

    #[test]
    fn parallel_branches_add_admittance() {
        let y = build_admittance(
            2,
            &[
                Branch::new(0, 1, 0.0, 0.2, 0.0),
                Branch::new(0, 1, 0.0, 0.2, 0.0),
            ],
        )
        .unwrap();
        assert!((y.get(0, 1) - c(0.0, 10.0)).norm() < 1e-12);
    }

    #[test]
    fn scale_halves_off_diagonal_magnitude() {
        let base = build_admittance(2, &[Branch::new(0, 1, 0.01, 0.1, 0.0)]).unwrap();
        let scaled =
            build_admittance(2, &[Branch::new(0, 1, 0.01, 0.1, 0.0).with_scale(2.0)]).unwrap();
        let ratio = scaled.get(0, 1).norm() / base.get(0, 1).norm();
        assert!((ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn charging_shows_up_in_row_sums() {
        // Series terms cancel in a row sum, leaving the shunt half-charging.
        let b = 0.4;
        let y = build_admittance(
            3,
            &[
                Branch::new(0, 1, 0.01, 0.1, b),
                Branch::new(1, 2, 0.02, 0.2, 0.0),
            ],
        )
        .unwrap();
        for i in 0..3 {
            let row_sum: Complex64 = (0..3).map(|j| y.get(i, j)).sum();
            let expected_b = match i {
                0 | 1 => b / 2.0,
                _ => 0.0,
            };
            assert!(
                (row_sum - c(0.0, expected_b)).norm() < 1e-12,
                "row {i} sum {row_sum}"
            );
        }
    }

    #[test]
    fn disconnected_bus_is_an_error() {
        assert!(matches!(
            build_admittance(3, &[Branch::new(0, 1, 0.0, 0.1, 0.0)]),
            Err(NetworkError::DisconnectedNetwork(2))
        ));
    }

    #[test]
    fn out_of_range_and_zero_impedance_are_errors() {
        assert!(matches!(
            build_admittance(2, &[Branch::new(0, 5, 0.0, 0.1, 0.0)]),
            Err(NetworkError::BusOutOfRange(5))
        ));
        assert!(matches!(
            build_admittance(2, &[Branch::new(0, 1, 0.0, 0.0, 0.0)]),
            Err(NetworkError::ZeroImpedanceBranch { .. })
        ));
    }
}
