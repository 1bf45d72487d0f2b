//! Three-mode Gaussian states under symmetric parametric amplification,
//! amplitude damping and thermal noise.
//!
//! * [`gaussian`]: covariance-matrix conventions, symplectic form, partial
//!   transposition and Hermitian spectra.
//! * [`evolution`]: propagators, stationary moments and the symmetric family.
//! * [`separability`]: PPT tests, the fully-separability feasibility test,
//!   closed-form phase boundaries and the three-class classifier.
//! * [`oracles`]: brute-force cross-checks (RK4, grid search, bisection).
//!
//! All routines are generic over the real scalar type; the `*64` aliases
//! below fix it to `f64`.

// `!(x >= y)` forms are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolution;
pub mod gaussian;
pub mod linalg;
pub mod oracles;
pub mod scalar;
pub mod separability;

pub use error::{Error, Result};
pub use scalar::Real;

pub type CovarianceMatrix64 = gaussian::CovarianceMatrix<f64>;
pub type SymplecticForm64 = gaussian::SymplecticForm<f64>;
pub type AmplifierMatrix64 = evolution::AmplifierMatrix<f64>;
pub type BathParams64 = evolution::BathParams<f64>;
pub type PropagatorPair64 = evolution::PropagatorPair<f64>;
pub type ComplexMoments64 = evolution::ComplexMoments<f64>;
pub type SymmetricFamily64 = evolution::SymmetricFamily<f64>;
pub type SymmetricEntries64 = evolution::SymmetricEntries<f64>;
pub type Horizon64 = evolution::Horizon<f64>;

pub type SchurPair64 = separability::SchurPair<f64>;
pub type FeasibilityProblem64 = separability::FeasibilityProblem<f64>;
pub type ClassificationReport64 = separability::ClassificationReport<f64>;
