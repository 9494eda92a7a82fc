//! Verification of modular tensor category data.
//!
//! [`data`] holds fusion rules and the S-matrix, [`fusion`] checks the
//! Verlinde formula and its relatives, [`fr`] checks F and R symbols, and
//! [`characters`] checks modular invariance of q-series. [`suite`] runs
//! named checks over a loaded [`format::DataSet`].
//!
//! ```
//! use modular_data::catalog::get_entry;
//! use modular_data::suite::{run_checks, Check, SuiteOptions};
//!
//! let fib = get_entry("fibonacci").unwrap();
//! let report = run_checks(&fib, "catalog:fibonacci", &Check::ALL, &SuiteOptions::default());
//! assert_eq!(report.exit_code(), 0);
//! ```

pub mod catalog;
pub mod characters;
pub mod data;
pub mod error;
pub mod expr;
pub mod format;
pub mod fr;
pub mod fusion;
pub mod phase;
pub mod report;
pub mod suite;
