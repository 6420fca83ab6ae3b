//! Numerical laboratory for oscillatory divergence-form elliptic operators.
//!
//! The crate builds layered coefficient fields driven by lacunary frequency
//! sequences, evaluates the Riesz products that model their Poisson kernels,
//! measures reverse Hölder / A∞ / L log L constants of sampled weights,
//! estimates the Kenig–Pipher Carleson functional, and solves the discrete
//! Dirichlet problem to extract elliptic measures.
//!
//! Modules:
//! - [`construction`]: lacunary pairs, amplitude schedules, cutoff, coefficient fields.
//! - [`riesz`]: Riesz products, sparse Fourier expansions, norms and diagnostics.
//! - [`weights`]: quantitative absolute-continuity constants over dyadic families.
//! - [`carleson`]: Kenig–Pipher functional by quadrature and its analytic lower bound.
//! - [`solver`]: conservative five-point operator, PCG, elliptic measure, kernel comparison.

pub mod carleson;
pub mod construction;
mod error;
pub mod lowdisc;
pub mod riesz;
pub mod solver;
mod sum;
pub mod weights;

pub use error::{Error, Result};
