//! Batch verification driver for the Gevrey operator calculus: suite
//! execution, configuration and report emission. The binary front end lives
//! in `main.rs`; everything here is library code so the suites can be
//! driven from tests.

// `!(x > y)` validations reject NaN where `x <= y` would accept it
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod report;
pub mod suites;

pub use config::{default_config, SuiteConfig};
pub use report::{emit_report, ReportFormat};
pub use suites::{run_suite, ResultRecord, Suite};
