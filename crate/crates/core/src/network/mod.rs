//! Static network model: admittance assembly, AC power flow, and the
//! algebraic solution used at every dynamic step.

mod power_flow;
mod solution;
mod ybus;

pub use power_flow::{solve_power_flow, BusSpec, PowerFlowResult};
pub use solution::{apply_fault, network_solution, network_solution_lu, zi_load_current, ZiLoad};
pub use ybus::{build_admittance, Branch};

use crate::numerics::LinalgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetworkError {
    /// Some bus cannot be reached from bus 0 through in-service branches.
    #[error("network is disconnected: bus {0} unreachable")]
    DisconnectedNetwork(usize),
    /// A branch references a bus outside the network.
    #[error("branch endpoint {0} outside bus range")]
    BusOutOfRange(usize),
    /// Newton-Raphson failed to reach the mismatch tolerance.
    #[error("power flow diverged: mismatch {mismatch:.3e} after {iterations} iterations")]
    PowerFlowDiverged { iterations: usize, mismatch: f64 },
    /// The fixed-point iteration over voltage-dependent injections failed.
    #[error("network solution diverged: delta {delta:.3e} after {iterations} iterations")]
    NetworkSolutionDiverged { iterations: usize, delta: f64 },
    /// A branch has zero series impedance.
    #[error("branch {from}-{to} has zero series impedance")]
    ZeroImpedanceBranch { from: usize, to: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
