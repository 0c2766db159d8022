//! Grover search from arbitrary complex initial amplitudes.
//!
//! Two engines live side by side: [`analytic`] predicts amplitudes, success
//! probability and measurement times in closed form from the block means and
//! variances of the initial state, and [`sim`] runs the literal oracle-flip /
//! inversion-about-average iteration on a full state vector. [`distributions`]
//! produces seeded initial states and [`planner`] turns the probability law
//! into measurement schedules.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod analytic;
pub mod distributions;
mod error;
pub mod model;
pub mod planner;
pub mod sim;

pub use error::{Error, Result};
pub use num_complex::{self, Complex64};
