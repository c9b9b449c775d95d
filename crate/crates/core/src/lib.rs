//! Surface-localized transmission eigenmodes for a constant-contrast disk or ball.
//!
//! The crate is organized bottom-up:
//!
//! * [`specfun`] evaluates Bessel functions of integer and half-integer order,
//!   in plain and log-scaled form.
//! * [`zeros`] brackets and refines the zeros of `J_ν` and `J'_ν`.
//! * [`eigensolver`] locates roots of the boundary-matching determinant.
//! * [`eigenmodes`] builds the eigenfunction pair `(w, v)` from an eigenvalue.
//! * [`localization`] measures interior L² energy against the full ball.
//! * [`verify`] evaluates the inequalities behind the localization argument.

pub mod eigenmodes;
pub mod eigensolver;
mod error;
pub mod localization;
pub mod quadrature;
pub mod specfun;
pub mod verify;
pub mod zeros;

pub use eigenmodes::{BoundaryResidual, EigenmodePair, Normalization, Which};
pub use eigensolver::{Dimension, Medium, ModeIndex, ScanResult, SolverOptions, TransmissionEigenvalue};
pub use error::{Error, Result};
pub use localization::{LocalizationReport, ProfileRow};
pub use quadrature::QuadOptions;
pub use verify::{BoundCheck, CarliniDecomposition, CheckInputs, EigenCase};

pub use specfun::{LogScaled, Order};
pub use zeros::{BesselZero, Interval, ZeroKind};
