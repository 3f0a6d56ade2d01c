//! Command implementations behind the `otisham` binary that are more than
//! thin wrappers: the count reproduction and the constructive sweep.

pub mod report;
pub mod reproduce;
pub mod sweep;

pub use report::{Exit, RunReport};
