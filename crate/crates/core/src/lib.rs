//! Nonlinear quantum metrology with two-mode Bose-Einstein condensates.
//!
//! * [`spin`]: exact Dicke-basis simulation of collective-spin protocols,
//!   Fisher information and Cramér-Rao bounds.
//! * [`scaling`]: critical atom numbers, cloud radii and the sensitivity
//!   exponent of trapped condensates.
//! * [`thomas_fermi`]: closed-form Thomas-Fermi profiles, phase dynamics and
//!   fringe visibility.
//! * [`gp`]: Gross-Pitaevskii ground states and coupled two-mode evolution.
//! * [`counting`]: atom-counting noise and its effect on the estimate.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod counting;
pub mod error;
pub mod gp;
pub mod physical;
pub mod scaling;
pub mod special;
pub mod spin;
pub mod stats;
pub mod thomas_fermi;

pub use error::{Error, Result};
