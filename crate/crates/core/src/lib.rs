//! Steerability of two-qubit T states.
//!
//! A two-qubit state with vanishing local Bloch vectors (a *T state*) is fully
//! described by its 3x3 correlation matrix `T`. Alice can steer Bob's qubit
//! exactly when the maximum violation
//!
//! ```text
//! F = (1/4pi) \int_S sqrt(<v| T^T T |v>) dS
//! ```
//!
//! exceeds `1/2`. This crate evaluates `F` (closed forms for isotropic and
//! axially symmetric spectra, adaptive sphere quadrature otherwise), the
//! finite-setting bounds `C_N`, concurrence, the standard state families, and
//! the sweeps and scatter runs built on them.
//!
//! ```
//! use tsteer::{families, steering};
//!
//! let rho = families::werner_pd(0.8, 0.36).unwrap();
//! let report = steering::steering_verdict(&rho).unwrap();
//! assert!(report.steerable);
//! assert!((report.concurrence - 0.54).abs() < 1e-12);
//! ```
//!
//! Runnable walkthroughs live in `examples/`; the `tsteer` binary exposes the
//! same operations on the command line (see [`cli`]).

// `!(x > 0.0)` is used on purpose so NaN is rejected with the bad values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod entanglement;
pub mod error;
pub mod families;
pub mod quadrature;
pub mod quantum_state;
pub mod steering;

pub use error::{Error, Result};
pub use quantum_state::{CorrelationMatrix, DensityMatrix, C64};
pub use steering::{SingularSpectrum, SteeringReport};
