//! Charged harmonic oscillator in a classical zero-point field, compared with
//! a truncated-basis quantum oscillator, under a Gaussian excitation pulse
//! that retains its spatial dependence beyond the dipole approximation.

pub mod classical;
pub mod cli;
pub mod config;
pub mod error;
pub mod model;
pub mod output;
pub mod pulse;
pub mod quantum;
pub mod rng;
pub mod schedule;
pub mod spectrum;
pub mod svg;
pub mod zpf;

pub use error::{Error, Result};
