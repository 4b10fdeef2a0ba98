//! Swarm protocol: credibility scoring, CWPA counters, weighted merging,
//! and the cycle-by-cycle runner.

pub mod cwpa;
pub mod history;
pub mod merge;
pub mod runner;
