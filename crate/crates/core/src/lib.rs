//! Information-content analysis of variational cost landscapes.
//!
//! A fixed-step isotropic random walk over a landscape yields finite-size
//! directional derivatives `ΔC_i`. Discretising them at a threshold `ε`
//! gives a three-letter symbol sequence whose pair entropy `H(ε)` (the
//! information content) peaks at the MIC `(ε_M, H_M)` and falls below a
//! threshold `η` at the sensitivity `ε_S`. Because the projection of a
//! gradient on a uniform random direction follows a scaled beta law,
//! those two features bound the walk-averaged gradient norm `‖∇C‖_W`.
//!
//! The crate is generic over the scalar type ([`Real`]); `f64` aliases are
//! exported below for the common case.
//!
//! * [`landscape`]: cost-function contract, sampling, random walks and
//!   closed-form test landscapes.
//! * [`quantum`]: statevector simulator for the layered RY/CZ ansatz with
//!   local and global observables.
//! * [`ic`]: symbols, pair probabilities, `H(ε)` and MIC/SIC features.
//! * [`special`], [`bounds`]: incomplete beta machinery and the bounds.
//! * [`fit`]: least-squares pre-factor fits.
//! * [`experiment`]: configuration, datasets, scans and the validation
//!   suites behind the command-line tool.

pub mod bounds;
pub mod error;
pub mod experiment;
pub mod fit;
pub mod ic;
pub mod landscape;
pub mod quantum;
pub mod real;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
pub use real::Real;

pub type ParameterPointF64 = landscape::ParameterPoint<f64>;
pub type WalkConfigF64 = landscape::WalkConfig<f64>;
pub type WalkRecordF64 = landscape::WalkRecord<f64>;
pub type AnalyticLandscapeF64 = landscape::AnalyticLandscape<f64>;
pub type StateVectorF64 = quantum::StateVector<f64>;
pub type IcCurveF64 = ic::IcCurve<f64>;
pub type IcFeaturesF64 = ic::IcFeatures<f64>;
pub type GradientBoundsF64 = bounds::GradientBounds<f64>;
pub type FitResultF64 = fit::FitResult<f64>;

pub type WalkRecordF32 = landscape::WalkRecord<f32>;
pub type StateVectorF32 = quantum::StateVector<f32>;
