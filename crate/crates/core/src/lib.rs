//! Rank-2 meromorphic connections on the Riemann sphere in apparent-singularity
//! coordinates: normal forms, local formal reductions, isomonodromic
//! Hamiltonians and symplectic forms, all in exact rational arithmetic.

pub mod cli;
pub mod connection;
pub mod error;
pub mod exactalg;
pub mod isoflow;
pub mod localform;
pub mod symplectic;

pub use error::{Error, Result};
