//! # frailhr
//!
//! Hazard ratios under unmeasured frailty.
//!
//! Event times in each trial arm follow a finite mixture of exponentials,
//! one component per latent stratum. The crate gives
//!
//! - exact marginal survival, hazard and hazard-ratio curves ([`frailty`]),
//! - a reproducible simulator of the corresponding randomised trial with
//!   joint potential event times and censoring ([`sim`]),
//! - Kaplan–Meier, Nelson–Aalen, Cox (overall and per period) and Breslow
//!   estimators ([`estimators`]),
//! - landmark, RMST and log-survival-ratio effect measures and a
//!   censoring-sensitivity experiment ([`estimands`]),
//! - the `frailhr` command-line tool ([`cli`]).
//!
//! ```
//! use frailhr::frailty::{hazard_ratio, limit_hazard_ratio, TwoArmTruth};
//!
//! let truth = TwoArmTruth::two_stratum();
//! assert!((hazard_ratio(&truth, 0.0).unwrap() - 0.5).abs() < 1e-12);
//! assert!(hazard_ratio(&truth, 5.0).unwrap() > 0.6);
//! assert_eq!(limit_hazard_ratio(&truth).unwrap(), 0.5);
//! ```

pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod estimands;
pub mod estimators;
pub mod frailty;
pub mod io;
pub mod sim;

pub use error::{Error, Result};
