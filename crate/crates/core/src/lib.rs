//! Numerical laboratory for normal families of holomorphic functions.
//!
//! The crate represents holomorphic functions as expression trees
//! ([`AnalyticFn`]) and builds verification pipelines on top of them:
//! argument-principle root counting, constructive Zalcman-type rescaling,
//! extraction of exponential forms of zero-free functions, and
//! high-precision evaluation of the constants that enter the quantitative
//! disk theorem.

pub mod analytic;
pub mod config;
pub mod constants;
pub mod dsl;
pub mod error;
pub mod report;
pub mod roots;
pub mod scenario;
pub mod zalcman;
pub mod zerofree;

pub use analytic::{AnalyticFn, Disk, Expr, GridSpec};
pub use config::LabConfig;
pub use error::{Error, ParseError, Result};
pub use report::{CheckReport, Verdict, Witness};
pub use num_complex::Complex64;
