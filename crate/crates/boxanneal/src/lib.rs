//! Continuous-space quantum annealing of a particle in a box.
//!
//! The model is a single particle confined to `[0, L]` with a multi-well
//! cosine potential. The annealing parameter `s` scales the kinetic term as
//! `p²/(2ms)`, emulating a growing mass that suppresses quantum fluctuations;
//! sweeping `s` from small to large drives the system from a delocalized
//! ground state toward classical localization in the potential minima.
//!
//! The crate computes both statics (low-lying spectra over `s`, gap closures,
//! flat-gap plateaus) and dynamics (time-dependent Schrödinger evolution under
//! a linear schedule, residual-energy curves), alongside closed-form and
//! variational predictions used as independent cross-checks.

pub mod cli;
pub mod dst;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod oracles;
pub mod potential;
pub mod spectrum;
pub mod variational;

pub use error::{Error, Result};
