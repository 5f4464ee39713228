//! Numerical laboratory for composite waves of multi-dimensional viscous
//! conservation laws: viscous shock profiles, smooth approximate rarefactions,
//! the weighted superposition ansatz with dynamic shifts, a method-of-lines
//! solver, and the full set of contraction diagnostics.

pub mod error;
pub mod linalg;
pub mod numerics;
pub mod ode;

pub mod model;
pub mod eigen;
pub mod hugoniot;
pub mod rarefaction;
pub mod shock_profile;

pub use error::{CoreError, Result};
