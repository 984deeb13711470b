//! Classical Euler elastica, end to end.
//!
//! The crate is organised bottom-up:
//!
//! * [`elliptic`]: Jacobi elliptic integrals and functions in the parameter
//!   convention `m = k²`.
//! * [`profiles`]: curvature-level solutions of the elastica equation.
//! * [`curves`]: exact planar elasticae, the figure-eight constants, the leaf,
//!   leafed elasticae and spatial reconstruction from curvature and torsion.
//! * [`odeint`]: initial-value integration of the fourth-order elastica
//!   equation with conservation monitors.
//! * [`discrete`]: polygonal curves, discrete bending energy, multiplicity
//!   detection and the Li–Yau type inequality check.
//! * [`minimize`]: fixed-length minimization of the discrete bending energy
//!   under pinned and clamped boundary conditions.
//! * [`io`]: plain-text formats shared by the command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curves;
pub mod discrete;
pub mod elliptic;
mod error;
pub mod io;
pub mod minimize;
pub mod odeint;
pub mod profiles;

pub use error::{Error, Result};

/// Points are stored in three dimensions; planar data keeps `z = 0`.
pub type Point = nalgebra::Vector3<f64>;
