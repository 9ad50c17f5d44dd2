//! Plane-wave scattering through one or two point interactions on a line.
//!
//! Each point interaction is one element of U(2), written either in angle
//! form ([`U2Params`]) or in length form ([`PointInteraction`]). The crate
//! computes single-interaction S-matrices and transfer matrices, the
//! amplitudes of a two-interaction problem, and the wavenumbers where the
//! pair becomes perfectly transparent.
//!
//! ```
//! use pointscatter::{ExtendedLength, PointInteraction, single_scatter};
//! use std::f64::consts::FRAC_PI_2;
//!
//! // a delta potential: L- = 0, mu = pi/2, nu = 0
//! let delta = PointInteraction::new(
//!     ExtendedLength::Finite(1.0),
//!     ExtendedLength::Finite(0.0),
//!     FRAC_PI_2,
//!     0.0,
//!     0.0,
//! )
//! .unwrap();
//! let (t1, r1) = single_scatter::probabilities(&delta, 1.0).unwrap();
//! assert!((t1 - 0.5).abs() < 1e-15);
//! assert!((t1 + r1 - 1.0).abs() < 1e-15);
//! ```

pub mod cli;
pub mod compose;
pub mod direct_solver;
mod error;
pub mod matrix;
pub mod resonance;
pub mod single_scatter;
pub mod u2param;
pub mod verify;

pub use compose::{SeriesExpansion, TwoPointSolution};
pub use error::{Error, Result};
pub use matrix::Mat2;
pub use resonance::{QuarticCoefficients, ResonanceClass, ResonanceRoot};
pub use single_scatter::{ScatteringMatrix, TransferMatrix};
pub use u2param::{ExtendedLength, PointInteraction, U2Params, UnitaryMatrix2};

pub type C64 = num_complex::Complex64;
