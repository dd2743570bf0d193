//! Exact dynamics of a two-level atom undergoing m-photon transitions in
//! q-deformed Jaynes–Cummings models.
//!
//! The library is organized bottom-up:
//! - [`deformed_algebra`]: nonlinearity function f(N), deformed numbers {n},
//!   factorials and the deformed exponential for all deformation variants.
//! - [`field_states`]: deformed coherent states of the initial field and
//!   their summary statistics.
//! - [`spectrum`]: exact dressed-state spectrum of the coupled doublets.
//! - [`dynamics`]: closed-form time evolution and atomic observables
//!   (inversion, dipole quadratures, squeezing indicator).
//! - [`revival_analysis`]: collapse/revival timescales, critical detuning,
//!   and second-order expansion diagnostics.
//! - [`oracle`]: independent truncated-basis integrator used as ground truth
//!   for the closed-form dynamics.
//! - [`scenario`] and [`cli`]: configuration parsing and the command-line
//!   front end.

pub mod cli;
pub mod deformed_algebra;
pub mod dynamics;
pub mod error;
pub mod field_states;
pub mod oracle;
pub mod revival_analysis;
pub mod scenario;
pub mod spectrum;

pub use deformed_algebra::{DeformationKind, DeformationSpec};
pub use error::{Error, Result};
pub use field_states::{AtomInit, FieldAmplitude, PhotonDistribution};
pub use spectrum::{DressedPair, ModelParams};
