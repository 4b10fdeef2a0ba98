//! From-scratch feedforward regressor: architecture, initialization,
//! forward/backward passes, mini-batch training, and evaluation metrics.

pub mod arch;
pub mod metrics;
pub mod net;
pub mod train;
