//! Heat contents of isotropic α-stable processes on self-similar fractal drums.
//!
//! The crate is organised as a small numerical laboratory:
//!
//! * [`geometry`]: similitudes, fractal drums (`G = ∪ R_j G ∪ G₀`), the Cantor
//!   and Sierpiński-gasket complements, and the dimension equation `Σ r_j^b = 1`.
//! * [`simulate`]: exact stable increments by subordination and Monte Carlo
//!   estimators for spectral, regular and subordinate-killed heat contents.
//! * [`analytic`]: closed forms and quadrature oracles that do not touch the
//!   Monte Carlo engine (Lévy constants, stable densities, fractional perimeters,
//!   eigen-series).
//! * [`renewal`]: span detection, the renewal equation `f = Lf + φ` and its
//!   asymptotics, including the drum constant `C₁` and the log-periodic
//!   amplitude.
//! * [`harness`]: experiment plans, run records, power-law and log-periodic fits.
//! * [`cli`]: the command-line front end used by the `fracdrum` binary.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod extrapolate;
pub mod geometry;
pub mod harness;
pub mod renewal;
pub mod simulate;

pub use error::{Error, Result};
