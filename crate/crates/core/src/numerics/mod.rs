//! Shared numerical building blocks: first-order control blocks, a
//! predictor-corrector integrator, and dense complex linear solves.

mod blocks;
mod integrator;
mod linalg;

pub use blocks::{
    anti_windup_deriv, deadband, first_order_lag_deriv, lead_lag_deriv, lead_lag_output,
    pi_output, washout_output, washout_step, BlockError, BlockState,
};
pub use integrator::{heun_step, DeviceState, IntegratorError};
pub use linalg::{solve_linear_complex, ComplexMatrix, LinalgError};
