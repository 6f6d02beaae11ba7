//! Modal analysis of simulated time series: Prony decomposition into damped
//! sinusoids, damping ratios, dominant-mode selection, and strategy ranking.

mod mode;
mod prony;
mod rank;

pub use mode::{damping_ratio, dominant_mode, Mode};
pub use prony::{detrend_linear, prony_decompose, reconstruct, ModalError};
pub use rank::{rank_strategies, RankedStrategy};
