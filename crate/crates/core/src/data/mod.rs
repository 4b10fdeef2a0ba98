//! Synthetic battery relaxation data: generation, feature extraction,
//! normalization, scenario partitioning, and CSV ingestion/export.

pub mod condition;
pub mod csv_io;
pub mod curve;
pub mod generator;
pub mod normalize;
pub mod partition;
pub mod point;
pub mod scenario;
