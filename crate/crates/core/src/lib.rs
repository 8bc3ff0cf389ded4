//! Continuous-time random walks on graphs, classical and quantum, together with
//! an emulator for running the 4-cycle quantum walk on a two-spin NMR sample.
//!
//! Numeric code is generic over [`Real`] (`f32`, `f64`); the aliases below fix
//! the scalar to `f64`.

// `!(x <= tol)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dsl;
pub mod error;
pub mod oracle;
pub mod scalar;
pub mod spin;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};
pub use scalar::Real;

pub type WalkGraph = walk::WalkGraph<f64>;
pub type GeneratorMatrix = walk::GeneratorMatrix<f64>;
pub type ProbabilityDistribution = walk::ProbabilityDistribution<f64>;
pub type StateVector = walk::StateVector<f64>;
pub type UnitaryMatrix = walk::UnitaryMatrix<f64>;
pub type WalkObservables = walk::WalkObservables<f64>;
pub type Spectrum = walk::Spectrum<f64>;
pub type SpinSystem = spin::SpinSystem<f64>;
pub type DeviationMatrix = spin::DeviationMatrix<f64>;
pub type PopulationReadout = spin::PopulationReadout<f64>;
pub type ConcreteSequence = dsl::ConcreteSequence<f64>;
pub type Bindings = dsl::Bindings<f64>;
