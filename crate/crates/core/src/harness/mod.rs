//! Experiment harness: learning-mode runners, the folds-by-seeds study
//! driver, and report emission.

pub mod modes;
pub mod report;
pub mod study;
