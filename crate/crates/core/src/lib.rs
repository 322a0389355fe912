//! Simulation of dissipative singlet preparation for two hole spins in a
//! quantum-dot molecule driven through trion levels.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod qcore;

pub use error::{Error, Result};
pub mod physics;
pub mod hamiltonians;
pub mod dissipators;
pub mod dynamics;
pub mod scenarios;
pub mod validate;
