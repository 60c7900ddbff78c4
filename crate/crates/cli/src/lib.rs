//! Scenario files, seeded verification suites and SVG figures on top of
//! `ckm-core`.

pub mod checks;
pub mod cli;
pub mod error;
pub mod random;
pub mod scenario;
pub mod suites;
pub mod svg;

pub use ckm_core;
pub use error::{HarnessError, Result};
