//! Desk-scale laboratory for the discrete-time single-server queue whose
//! customers are scheduled at integer times but arrive after i.i.d.
//! exponential delays (with independent thinning of each arrival).
//!
//! The chain tracks the pair (queue length, late customers). Its stationary
//! bivariate generating function solves a boundary value problem that this
//! crate attacks two independent ways:
//!
//! * [`solver`] — an exact power-series solution in the stay probability
//!   `q = e^(-lambda)`, computed order by order over arbitrary-precision
//!   rationals, so every identity it claims can be checked with equality
//!   rather than tolerance;
//! * [`simulator`] — a seeded Monte Carlo simulation of the two-dimensional
//!   chain itself.
//!
//! [`marginals`] expands the late-customer marginal through a q-Pochhammer
//! product and through a distinct-parts partition count, and [`validation`]
//! cross-checks all routes against each other.

pub mod error;
pub mod marginals;
pub mod params;
pub mod poly;
pub mod rational;
pub mod simulator;
pub mod solver;
pub mod validation;

pub use error::Error;
pub use params::{ModelParamsExact, ModelParamsFloat};
pub use poly::{BiPoly, Poly, QSeries};
pub use rational::{parse_rational, rat, rat_int, Rational};
