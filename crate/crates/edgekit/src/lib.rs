//! Numerical toolkit for the left soft edge of the Laguerre unitary ensemble.
//!
//! The crate evaluates the determinantal-point-process kernels attached to
//! complex Wishart matrices (Airy, Bessel, LUE and its edge-scaled variants),
//! the Liouville–Green machinery behind their large-dimension expansions,
//! Nyström discretizations with Hilbert–Schmidt / trace-norm bookkeeping,
//! Fredholm determinants (hence the Tracy–Widom distribution TW₂), and Monte
//! Carlo sampling of the ensembles themselves.  The headline experiment in
//! [`ratelab`] sweeps the dimension at a fixed shape ratio and fits the decay
//! exponents of the kernel-difference norms.

pub mod error;
pub mod kernels;
pub mod liouville_green;
pub mod montecarlo;
pub mod operator;
pub mod quad;
pub mod ratelab;
pub mod scaling;
pub mod specfun;

pub(crate) mod linalg;

pub use error::{Error, Result};
pub use scaling::EnsembleParams;
