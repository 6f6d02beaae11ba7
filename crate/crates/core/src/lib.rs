//! Phasor-domain dynamics of a two-area power system, used to study how
//! different damping strategies affect low-frequency inter-area oscillations.
//!
//! The crate is organized bottom-up:
//!
//! * [`numerics`]: control blocks, the fixed-step Heun integrator, and small
//!   dense linear algebra.
//! * [`network`]: admittance assembly, Newton-Raphson power flow, and the
//!   per-step algebraic network solution with voltage-dependent loads.
//! * [`machines`]: round-rotor synchronous machine with exciter, governor,
//!   and a dual-input power system stabilizer.
//! * [`gfl`]: grid-following converter plant with an oscillation-damping
//!   modulation path on either active or reactive current.
//! * [`gfm`]: grid-forming converter plant (virtual synchronous machine,
//!   droop, and a droop-based benchmark variant).
//! * [`modal`]: Prony analysis, damping ratios, and strategy ranking.
//! * [`scenarios`]: the two-area study system, disturbance playback, marginal
//!   tie-line search, and the all-strategy comparison.

pub mod modal;
pub mod numerics;

pub use modal::{Mode, RankedStrategy};
pub use numerics::{BlockState, ComplexMatrix, DeviceState};
